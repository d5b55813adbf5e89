"""Embedding backends: averaged word vectors, deterministic hash vectors,
and a precomputed-store wrapper.

Every backend produces fixed-dimension float64 vectors. A text whose tokens
all fall outside the vocabulary yields the zero vector with the degenerate
flag set; ranking decides what to do with it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .preprocess import remove_stopwords, tokenize


class EmbeddingError(Exception):
    pass


@dataclass(frozen=True)
class Embedding:
    values: np.ndarray
    backend: str
    degenerate: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise EmbeddingError("embedding values must be a 1-d vector")
        if not np.all(np.isfinite(values)):
            raise EmbeddingError("embedding contains non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class WordVectorTable:
    """Pretrained word vectors: token -> vector, all of dimension ``dim``."""

    vocab: dict[str, np.ndarray]
    dim: int


def load_word_vectors(path: str | Path, limit: int | None = None) -> WordVectorTable:
    """Parse a textual ``.vec`` file: header ``<count> <dim>``, then one
    ``token v1 ... vdim`` line per word. Keeps at most ``limit`` entries in
    file order.
    """
    path = Path(path)
    vocab: dict[str, np.ndarray] = {}
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise EmbeddingError(f"{path}: malformed header {header!r}")
        try:
            _count, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise EmbeddingError(f"{path}: malformed header {header!r}") from exc
        if dim <= 0:
            raise EmbeddingError(f"{path}: non-positive dimension {dim}")
        for line in fh:
            if limit is not None and len(vocab) >= limit:
                break
            parts = line.rstrip("\n").split(" ")
            token = parts[0]
            floats = [p for p in parts[1:] if p]
            if len(floats) != dim:
                raise EmbeddingError(
                    f"{path}: token {token!r} has {len(floats)} values, expected {dim}"
                )
            vec = np.array(floats, dtype=np.float64)
            if not np.all(np.isfinite(vec)):
                raise EmbeddingError(f"{path}: non-finite value for token {token!r}")
            vocab[token] = vec
    return WordVectorTable(vocab=vocab, dim=dim)


def embed_average(
    text: str,
    table: WordVectorTable,
    stopwords: set[str],
    backend_name: str = "wordvec",
) -> Embedding:
    """Mean of the word vectors of the cleaned in-vocabulary tokens.

    Out-of-vocabulary tokens are skipped; if nothing resolves the result is
    the zero vector, flagged degenerate.
    """
    tokens = remove_stopwords(tokenize(text), stopwords)
    vectors = [table.vocab[t] for t in tokens if t in table.vocab]
    if not vectors:
        return Embedding(np.zeros(table.dim), backend_name, degenerate=True)
    return Embedding(np.mean(vectors, axis=0), backend_name)


def l2_normalize(e: Embedding) -> Embedding:
    """Scale to unit L2 norm; the zero vector stays zero and degenerate."""
    norm = float(np.linalg.norm(e.values))
    if norm == 0.0 or e.degenerate:
        return Embedding(np.zeros(e.dim), e.backend, degenerate=True)
    return Embedding(e.values / norm, e.backend, degenerate=False)


def text_key(text: str) -> str:
    """Content-addressed key for a text: SHA-256 hex of its UTF-8 bytes."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class EmbeddingBackend(Protocol):
    """Contract all backends satisfy: a name, a fixed dimension, and a
    deterministic batch embed."""

    name: str
    dim: int

    def embed_batch(self, texts: list[str]) -> list[Embedding]: ...


def check_batch_dims(embeddings: list[Embedding], dim: int) -> None:
    for e in embeddings:
        if e.dim != dim:
            raise EmbeddingError(f"embedding has dim {e.dim}, backend declares {dim}")


class HashBackend:
    """Deterministic pseudo-embeddings for tests and demos.

    Each token maps to a fixed Gaussian vector seeded by the SHA-256 of the
    token (plus the backend seed); a text embeds as the mean over its tokens.
    No model files, no network, identical output on every platform.
    """

    def __init__(self, dim: int = 16, seed: int = 0):
        if dim <= 0:
            raise EmbeddingError("dim must be positive")
        self.dim = dim
        self.seed = seed
        self.name = f"hash-d{dim}-s{seed}"
        self._token_cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._token_cache.get(token)
        if vec is None:
            digest = hashlib.sha256(f"{self.seed}:{token}".encode("utf-8")).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
            vec = rng.standard_normal(self.dim)
            self._token_cache[token] = vec
        return vec

    def embed_one(self, text: str) -> Embedding:
        tokens = tokenize(text)
        if not tokens:
            return Embedding(np.zeros(self.dim), self.name, degenerate=True)
        vectors = [self._token_vector(t) for t in tokens]
        return Embedding(np.mean(vectors, axis=0), self.name)

    def embed_batch(self, texts: list[str]) -> list[Embedding]:
        out = [self.embed_one(t) for t in texts]
        check_batch_dims(out, self.dim)
        return out


class WordVectorBackend:
    """Averaged pretrained word vectors over cleaned tokens."""

    def __init__(self, table: WordVectorTable, stopwords: set[str], name: str = "wordvec"):
        if not table.vocab:
            raise EmbeddingError("word-vector table is empty")
        self.table = table
        self.stopwords = stopwords
        self.name = name
        self.dim = table.dim

    def embed_batch(self, texts: list[str]) -> list[Embedding]:
        out = [embed_average(t, self.table, self.stopwords, self.name) for t in texts]
        check_batch_dims(out, self.dim)
        return out


class StoreBackend:
    """Serves precomputed embeddings from a loaded store; never computes."""

    def __init__(self, embeddings: dict[str, Embedding], name: str):
        if not embeddings:
            raise EmbeddingError("store holds no embeddings for this backend")
        dims = {e.dim for e in embeddings.values()}
        if len(dims) != 1:
            raise EmbeddingError(f"store mixes dimensions {sorted(dims)}")
        self._by_key = embeddings
        self.name = name
        self.dim = dims.pop()

    def embed_batch(self, texts: list[str]) -> list[Embedding]:
        missing = [text_key(t) for t in texts if text_key(t) not in self._by_key]
        if missing:
            raise EmbeddingError(
                f"store is missing {len(missing)} embedding(s); keys: {', '.join(missing[:5])}"
            )
        return [self._by_key[text_key(t)] for t in texts]
