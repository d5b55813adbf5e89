"""Ranking quality scoring: DCG, ideal DCG, and their ratio at cutoff k.

Relevance is binary: a metric either belongs to the requirement's ground
truth set or it does not. The position discount is 1 for rank 1 and
1/log2(i) for rank i >= 2, which makes rank 2 effectively undiscounted as
well (log2(2) = 1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import GroundTruth
from .ranking import RankedList


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class EvalReport:
    per_requirement: dict[str, float]
    mean_nonzero: float
    mean_all: float
    nonzero_count: int
    nonzero_mean_defined: bool
    k: int
    method: str
    backend: str


def gain(metric_id: str, relevant: frozenset[str] | set[str]) -> float:
    return 1.0 if metric_id in relevant else 0.0


def dcg_at_k(gains: list[float]) -> float:
    """g(r1) + sum_{i>=2} g(ri)/log2(i) over the supplied gain vector."""
    total = 0.0
    for i, g in enumerate(gains, start=1):
        total += g if i == 1 else g / math.log2(i)
    return total


def idcg_at_k(num_relevant: int, k: int) -> float:
    """DCG of the ideal list: min(num_relevant, k) leading gains of 1."""
    if num_relevant < 0:
        raise ValueError("num_relevant must be >= 0")
    return dcg_at_k([1.0] * min(num_relevant, k))


def ndcg_at_k(ranking: RankedList, relevant: frozenset[str] | set[str], k: int = 10) -> float:
    """Normalized DCG at cutoff ``k``, in [0, 1].

    Exactly 0 when no relevant metric appears in the top k; rankings shorter
    than k count as zero gains beyond their length.
    """
    if not relevant:
        raise EvaluationError("relevant set must be nonempty")
    if k < 1:
        raise ValueError("k must be >= 1")
    gains = [gain(mid, relevant) for mid in ranking.metric_ids()[:k]]
    ideal = idcg_at_k(len(relevant), k)
    return dcg_at_k(gains) / ideal


def evaluate(
    rankings: list[RankedList],
    truth: GroundTruth,
    k: int = 10,
    method: str = "",
    backend: str = "",
) -> EvalReport:
    """Score every ranking and aggregate both ways.

    ``mean_nonzero`` averages only requirements whose score is positive;
    ``mean_all`` averages all of them, zeros included. ``nonzero_count`` is
    how many requirements got any relevant metric into the top k.
    """
    per: dict[str, float] = {}
    for r in rankings:
        if r.requirement_id in per:
            raise EvaluationError(f"duplicate requirement {r.requirement_id!r} in rankings")
        if r.requirement_id not in truth.mapping:
            raise EvaluationError(f"requirement {r.requirement_id!r} missing from ground truth")
        per[r.requirement_id] = ndcg_at_k(r, truth.relevant(r.requirement_id), k)
        if not method:
            method = r.method
        if not backend:
            backend = r.backend

    scores = list(per.values())
    nonzero = [s for s in scores if s > 0.0]
    mean_all = sum(scores) / len(scores) if scores else 0.0
    defined = bool(nonzero)
    mean_nonzero = sum(nonzero) / len(nonzero) if nonzero else 0.0
    return EvalReport(
        per_requirement=per,
        mean_nonzero=mean_nonzero,
        mean_all=mean_all,
        nonzero_count=len(nonzero),
        nonzero_mean_defined=defined,
        k=k,
        method=method,
        backend=backend,
    )


def save_report(report: EvalReport, path: str | Path) -> None:
    doc = {
        "method": report.method,
        "backend": report.backend,
        "k": report.k,
        "per_requirement": report.per_requirement,
        "mean_nonzero": report.mean_nonzero,
        "mean_all": report.mean_all,
        "nonzero_count": report.nonzero_count,
        "nonzero_mean_defined": report.nonzero_mean_defined,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_report(path: str | Path) -> EvalReport:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return EvalReport(
        per_requirement={k: float(v) for k, v in doc["per_requirement"].items()},
        mean_nonzero=float(doc["mean_nonzero"]),
        mean_all=float(doc["mean_all"]),
        nonzero_count=int(doc["nonzero_count"]),
        nonzero_mean_defined=bool(doc["nonzero_mean_defined"]),
        k=int(doc["k"]),
        method=doc["method"],
        backend=doc["backend"],
    )
