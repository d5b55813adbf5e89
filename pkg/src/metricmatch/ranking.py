"""Rank all candidate metrics for each requirement.

Two methods, matching the two pipelines under comparison: cosine similarity
over sentence embeddings, and exact Euclidean k-nearest-neighbors through a
K-d tree over averaged word vectors. Ties always break by ascending metric
id so output is deterministic.
"""

from __future__ import annotations

import json
from bisect import insort
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .embedding import Embedding, EmbeddingBackend, EmbeddingError, l2_normalize

COSINE = "cosine"
EUCLIDEAN_KNN = "euclidean-knn"


@dataclass(frozen=True)
class RankedList:
    requirement_id: str
    entries: tuple[tuple[str, float], ...]
    method: str
    backend: str

    def metric_ids(self) -> list[str]:
        return [mid for mid, _ in self.entries]


def cosine_similarity(a: Embedding, b: Embedding) -> float:
    """Cosine of the angle between two embeddings, in [-1, 1].

    Defined as 0 when either vector is zero, so degenerate texts sink to the
    bottom instead of producing NaN.
    """
    if a.dim != b.dim:
        raise EmbeddingError(f"dimension mismatch: {a.dim} != {b.dim}")
    na = float(np.linalg.norm(a.values))
    nb = float(np.linalg.norm(b.values))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a.values, b.values) / (na * nb))


def rank_by_cosine(
    requirement_id: str,
    req: Embedding,
    metrics: list[tuple[str, Embedding]],
    backend_name: str = "",
) -> RankedList:
    """All metrics in descending similarity; ties by ascending metric id."""
    if not metrics:
        raise ValueError("metrics must be nonempty")
    scored = [(mid, cosine_similarity(req, emb)) for mid, emb in metrics]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return RankedList(
        requirement_id=requirement_id,
        entries=tuple(scored),
        method=COSINE,
        backend=backend_name,
    )


class KdTree:
    """Exact nearest-neighbor structure over metric embeddings.

    Median split on the dimension of maximum spread; queries backtrack with
    a hypersphere test and are always identical to an exhaustive scan,
    including tie order.
    """

    _LEAF_SIZE = 16

    def __init__(self, metrics: list[tuple[str, Embedding]]):
        if not metrics:
            raise ValueError("cannot build a K-d tree over zero metrics")
        dims = {emb.dim for _, emb in metrics}
        if len(dims) != 1:
            raise EmbeddingError(f"metric embeddings mix dimensions {sorted(dims)}")
        self.dim = dims.pop()
        self.ids = [mid for mid, _ in metrics]
        self.points = np.stack([emb.values for _, emb in metrics])
        self.size = len(self.ids)
        self._root = self._build(np.arange(self.size))

    def _build(self, idx: np.ndarray):
        if len(idx) <= self._LEAF_SIZE:
            return ("leaf", idx)
        pts = self.points[idx]
        spread = pts.max(axis=0) - pts.min(axis=0)
        split = int(np.argmax(spread))
        order = idx[np.argsort(pts[:, split], kind="stable")]
        mid = len(order) // 2
        value = float(self.points[order[mid], split])
        return (
            "node",
            split,
            value,
            self._build(order[:mid]),
            self._build(order[mid:]),
        )

    def query(self, query: np.ndarray, k: int) -> list[tuple[float, str]]:
        """The k nearest entries as (distance, metric_id), ascending, ties by id."""
        # candidates kept sorted by (squared distance, id)
        cand: list[tuple[float, str]] = []

        def visit(node):
            if node[0] == "leaf":
                idx = node[1]
                d2 = np.sum((self.points[idx] - query) ** 2, axis=1)
                for i, dist2 in zip(idx, d2):
                    entry = (float(dist2), self.ids[i])
                    if len(cand) < k:
                        insort(cand, entry)
                    elif entry < cand[-1]:
                        insort(cand, entry)
                        cand.pop()
                return
            _, split, value, left, right = node
            diff = float(query[split]) - value
            near, far = (left, right) if diff < 0 else (right, left)
            visit(near)
            # ties must still be explored: a tied point with a smaller id wins
            if len(cand) < k or diff * diff <= cand[-1][0]:
                visit(far)

        visit(self._root)
        return [(float(np.sqrt(d2)), mid) for d2, mid in cand]


def build_kdtree(metrics: list[tuple[str, Embedding]]) -> KdTree:
    return KdTree(metrics)


def knn_query(
    tree: KdTree,
    query: Embedding,
    k: int,
    requirement_id: str = "",
    backend_name: str = "",
) -> RankedList:
    """Exact k nearest metrics by Euclidean distance, ascending.

    ``k`` is capped at the tree size.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if query.dim != tree.dim:
        raise EmbeddingError(f"query dim {query.dim} != tree dim {tree.dim}")
    hits = tree.query(query.values, min(k, tree.size))
    return RankedList(
        requirement_id=requirement_id,
        entries=tuple((mid, dist) for dist, mid in hits),
        method=EUCLIDEAN_KNN,
        backend=backend_name,
    )


def rank_all(
    corpus: Corpus,
    backend: EmbeddingBackend,
    method: str = COSINE,
    k: int = 10,
    normalize: bool = False,
) -> list[RankedList]:
    """One RankedList per requirement, in corpus order.

    Cosine ranks every metric; kNN returns the top k. ``normalize`` applies
    unit-norm scaling to all embeddings first (ablation switch for the
    baseline path).
    """
    if method not in (COSINE, EUCLIDEAN_KNN):
        raise ValueError(f"unknown method {method!r}")
    req_texts = [r.description for r in corpus.requirements]
    met_texts = [m.description for m in corpus.metrics]
    try:
        embeddings = backend.embed_batch(req_texts + met_texts)
    except Exception as exc:
        raise EmbeddingError(f"backend {backend.name!r} failed to embed corpus: {exc}") from exc
    if normalize:
        embeddings = [l2_normalize(e) for e in embeddings]
    req_embs = embeddings[: len(req_texts)]
    met_embs = list(zip(corpus.metric_ids(), embeddings[len(req_texts) :]))

    if method == COSINE:
        return [
            rank_by_cosine(req.id, emb, met_embs, backend.name)
            for req, emb in zip(corpus.requirements, req_embs)
        ]
    tree = build_kdtree(met_embs)
    return [
        knn_query(tree, emb, k, requirement_id=req.id, backend_name=backend.name)
        for req, emb in zip(corpus.requirements, req_embs)
    ]


def save_rankings(rankings: list[RankedList], path: str | Path) -> None:
    """One JSONL line per requirement."""
    lines = [
        json.dumps(
            {
                "requirement": r.requirement_id,
                "method": r.method,
                "backend": r.backend,
                "ranking": [{"metric": mid, "score": score} for mid, score in r.entries],
            }
        )
        for r in rankings
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_rankings(path: str | Path) -> list[RankedList]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        out.append(
            RankedList(
                requirement_id=doc["requirement"],
                entries=tuple((e["metric"], float(e["score"])) for e in doc["ranking"]),
                method=doc["method"],
                backend=doc["backend"],
            )
        )
    return out
