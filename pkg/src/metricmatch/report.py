"""Cross-model comparison tables and plot-data emission."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .evaluation import EvalReport


class ReportError(Exception):
    pass


@dataclass(frozen=True)
class ComparisonRow:
    backend: str
    method: str
    mean_nonzero: float
    mean_all: float
    nonzero_count: int
    delta_nonzero: float


@dataclass(frozen=True)
class Comparison:
    rows: tuple[ComparisonRow, ...]
    k: int
    baseline: str | None


def compare(reports: list[EvalReport], baseline: str | None = None) -> Comparison:
    """One row per report, sorted by descending non-zero mean.

    ``baseline`` names the backend whose non-zero mean anchors the delta
    column; with no baseline the deltas are zero.
    """
    if not reports:
        raise ReportError("need at least one report")
    ks = {r.k for r in reports}
    if len(ks) != 1:
        raise ReportError(f"reports mix k values {sorted(ks)}")
    seen = set()
    for r in reports:
        ident = (r.backend, r.method)
        if ident in seen:
            raise ReportError(f"duplicate backend/method pair {ident}")
        seen.add(ident)

    base_mean = 0.0
    if baseline is not None:
        matches = [r for r in reports if r.backend == baseline]
        if not matches:
            raise ReportError(f"baseline backend {baseline!r} not among reports")
        base_mean = matches[0].mean_nonzero

    ordered = sorted(reports, key=lambda r: (-r.mean_nonzero, r.backend, r.method))
    rows = tuple(
        ComparisonRow(
            backend=r.backend,
            method=r.method,
            mean_nonzero=r.mean_nonzero,
            mean_all=r.mean_all,
            nonzero_count=r.nonzero_count,
            delta_nonzero=(r.mean_nonzero - base_mean) if baseline is not None else 0.0,
        )
        for r in ordered
    )
    return Comparison(rows=rows, k=ks.pop(), baseline=baseline)


def emit_csv(comparison: Comparison, path: str | Path) -> None:
    """Fixed 6-decimal, locale-independent CSV for diff-stable goldens."""
    lines = ["backend,method,mean_nonzero,mean_all,nonzero_count,delta_nonzero"]
    for row in comparison.rows:
        lines.append(
            f"{row.backend},{row.method},{row.mean_nonzero:.6f},"
            f"{row.mean_all:.6f},{row.nonzero_count},{row.delta_nonzero:.6f}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_json(comparison: Comparison, path: str | Path) -> None:
    doc = {
        "k": comparison.k,
        "baseline": comparison.baseline,
        "rows": [
            {
                "backend": r.backend,
                "method": r.method,
                "mean_nonzero": r.mean_nonzero,
                "mean_all": r.mean_all,
                "nonzero_count": r.nonzero_count,
                "delta_nonzero": r.delta_nonzero,
            }
            for r in comparison.rows
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_comparison(path: str | Path) -> Comparison:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return Comparison(
        rows=tuple(
            ComparisonRow(
                backend=r["backend"],
                method=r["method"],
                mean_nonzero=float(r["mean_nonzero"]),
                mean_all=float(r["mean_all"]),
                nonzero_count=int(r["nonzero_count"]),
                delta_nonzero=float(r["delta_nonzero"]),
            )
            for r in doc["rows"]
        ),
        k=int(doc["k"]),
        baseline=doc["baseline"],
    )


def emit_plot_data(comparison: Comparison, mode: str, path: str | Path) -> None:
    """Two-column TSV of (backend label, mean) for one aggregation mode.

    ``mode`` is ``nonzero`` (only requirements with a hit in the top k) or
    ``all`` (zeros included).
    """
    if mode not in ("nonzero", "all"):
        raise ReportError(f"unknown plot-data mode {mode!r}")
    lines = []
    for row in comparison.rows:
        value = row.mean_nonzero if mode == "nonzero" else row.mean_all
        lines.append(f"{row.backend}\t{value:.6f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit(comparison: Comparison, fmt: str, path: str | Path, mode: str = "nonzero") -> None:
    if fmt == "csv":
        emit_csv(comparison, path)
    elif fmt == "json":
        emit_json(comparison, path)
    elif fmt == "plot-data":
        emit_plot_data(comparison, mode, path)
    else:
        raise ReportError(f"unknown format {fmt!r}")
