"""Corpus loading and validation.

A corpus bundles security requirements, candidate metrics, and the
expert-made requirement -> metrics mapping used as ground truth. Everything
is validated on load and immutable afterwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class CorpusError(Exception):
    """Raised for any structural problem in a corpus file.

    ``location`` identifies the offending record, e.g. ``requirements[3]``.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class Requirement:
    id: str
    description: str
    req_type: str = ""
    category: str | None = None
    extra: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Metric:
    id: str
    description: str
    category: str | None = None
    target_resource_type: str | None = None
    extra: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class GroundTruth:
    """Mapping from requirement id to the set of its correct metric ids."""

    mapping: dict[str, frozenset[str]]

    def relevant(self, requirement_id: str) -> frozenset[str]:
        return self.mapping[requirement_id]


@dataclass(frozen=True)
class Corpus:
    requirements: tuple[Requirement, ...]
    metrics: tuple[Metric, ...]
    ground_truth: GroundTruth

    def requirement_ids(self) -> list[str]:
        return [r.id for r in self.requirements]

    def metric_ids(self) -> list[str]:
        return [m.id for m in self.metrics]


@dataclass(frozen=True)
class WordStats:
    """Histogram of per-description word counts for one collection."""

    histogram: dict[int, int]
    mean: float
    n: int


_KNOWN_REQ_FIELDS = {"id", "description", "type", "category"}
_KNOWN_METRIC_FIELDS = {"id", "description", "category", "targetResourceType"}


def _require_str(record: dict, key: str, location: str) -> str:
    value = record.get(key)
    if not isinstance(value, str):
        raise CorpusError(f"missing or non-string field {key!r}", location)
    return value


def _parse_requirement(record: dict, location: str) -> Requirement:
    rid = _require_str(record, "id", location)
    description = _require_str(record, "description", location)
    if not description.strip():
        raise CorpusError(f"empty description for id {rid!r}", location)
    extra = {k: v for k, v in record.items() if k not in _KNOWN_REQ_FIELDS}
    return Requirement(
        id=rid,
        description=description,
        req_type=record.get("type", ""),
        category=record.get("category"),
        extra=extra,
    )


def _parse_metric(record: dict, location: str) -> Metric:
    mid = _require_str(record, "id", location)
    description = _require_str(record, "description", location)
    if not description.strip():
        raise CorpusError(f"empty description for id {mid!r}", location)
    extra = {k: v for k, v in record.items() if k not in _KNOWN_METRIC_FIELDS}
    return Metric(
        id=mid,
        description=description,
        category=record.get("category"),
        target_resource_type=record.get("targetResourceType"),
        extra=extra,
    )


def load_corpus(path: str | Path) -> Corpus:
    """Load and validate a corpus JSON file.

    Rejects duplicate ids, dangling mapping references, and empty
    descriptions; every diagnostic names the offending record.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CorpusError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise CorpusError("corpus document must be a JSON object")

    requirements: list[Requirement] = []
    seen_req: set[str] = set()
    for i, record in enumerate(raw.get("requirements", [])):
        loc = f"requirements[{i}]"
        if not isinstance(record, dict):
            raise CorpusError("record must be an object", loc)
        req = _parse_requirement(record, loc)
        if req.id in seen_req:
            raise CorpusError(f"duplicate requirement id {req.id!r}", loc)
        seen_req.add(req.id)
        requirements.append(req)

    metrics: list[Metric] = []
    seen_met: set[str] = set()
    for i, record in enumerate(raw.get("metrics", [])):
        loc = f"metrics[{i}]"
        if not isinstance(record, dict):
            raise CorpusError("record must be an object", loc)
        met = _parse_metric(record, loc)
        if met.id in seen_met:
            raise CorpusError(f"duplicate metric id {met.id!r}", loc)
        seen_met.add(met.id)
        metrics.append(met)

    mapping: dict[str, frozenset[str]] = {}
    for i, record in enumerate(raw.get("mappings", [])):
        loc = f"mappings[{i}]"
        if not isinstance(record, dict):
            raise CorpusError("record must be an object", loc)
        rid = _require_str(record, "requirement", loc)
        if rid not in seen_req:
            raise CorpusError(f"mapping references unknown requirement {rid!r}", loc)
        if rid in mapping:
            raise CorpusError(f"duplicate mapping for requirement {rid!r}", loc)
        metric_ids = record.get("metrics")
        if not isinstance(metric_ids, list) or not metric_ids:
            raise CorpusError(f"mapping for {rid!r} must list at least one metric", loc)
        for mid in metric_ids:
            if mid not in seen_met:
                raise CorpusError(f"mapping references unknown metric {mid!r}", loc)
        mapping[rid] = frozenset(metric_ids)

    return Corpus(
        requirements=tuple(requirements),
        metrics=tuple(metrics),
        ground_truth=GroundTruth(mapping=mapping),
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to the JSON schema; inverse of :func:`load_corpus`."""
    doc = {
        "requirements": [
            {
                "id": r.id,
                "description": r.description,
                "type": r.req_type,
                **({"category": r.category} if r.category is not None else {}),
                **r.extra,
            }
            for r in corpus.requirements
        ],
        "metrics": [
            {
                "id": m.id,
                "description": m.description,
                **({"category": m.category} if m.category is not None else {}),
                **(
                    {"targetResourceType": m.target_resource_type}
                    if m.target_resource_type is not None
                    else {}
                ),
                **m.extra,
            }
            for m in corpus.metrics
        ],
        "mappings": [
            {"requirement": rid, "metrics": sorted(mids)}
            for rid, mids in corpus.ground_truth.mapping.items()
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _stats(descriptions: list[str]) -> WordStats:
    counts = [len(d.split()) for d in descriptions]
    histogram: dict[int, int] = {}
    for c in counts:
        histogram[c] = histogram.get(c, 0) + 1
    n = len(counts)
    mean = sum(counts) / n if n else 0.0
    return WordStats(histogram=histogram, mean=mean, n=n)


def word_count_stats(corpus: Corpus) -> tuple[WordStats, WordStats]:
    """Word-count distributions for requirements and metrics.

    Counts whitespace-separated tokens of the raw descriptions; no cleaning
    is applied.
    """
    req_stats = _stats([r.description for r in corpus.requirements])
    met_stats = _stats([m.description for m in corpus.metrics])
    return req_stats, met_stats
