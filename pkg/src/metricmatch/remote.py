"""HTTP client for the embedding service.

Wire protocol: ``POST {endpoint}/embed`` with ``{"texts": [...], "normalize":
bool}`` returns ``{"model": str, "dim": int, "embeddings": [[...], ...]}``.
Batches above the cap are chunked transparently and reassembled in input
order; chunks may be requested concurrently with bounded parallelism.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import requests

from .embedding import Embedding

MAX_BATCH = 256


class RemoteError(Exception):
    pass


def _post_chunk(
    endpoint: str,
    model: str,
    texts: list[str],
    normalize: bool,
    retries: int,
    timeout: float,
) -> list[list[float]]:
    url = endpoint.rstrip("/") + "/embed"
    last_exc: Exception | None = None
    for attempt in range(retries + 1):
        try:
            resp = requests.post(
                url, json={"texts": texts, "normalize": normalize}, timeout=timeout
            )
        except requests.RequestException as exc:
            last_exc = exc
            if attempt < retries:
                time.sleep(0.5 * (attempt + 1))
            continue
        if resp.status_code != 200:
            raise RemoteError(f"service returned {resp.status_code}: {resp.text[:500]}")
        body = resp.json()
        embeddings = body.get("embeddings")
        dim = body.get("dim")
        if not isinstance(embeddings, list) or len(embeddings) != len(texts):
            raise RemoteError(
                f"protocol violation: expected {len(texts)} embeddings, "
                f"got {len(embeddings) if isinstance(embeddings, list) else type(embeddings)}"
            )
        for row in embeddings:
            if len(row) != dim:
                raise RemoteError(
                    f"protocol violation: row of length {len(row)} under declared dim {dim}"
                )
        return embeddings
    raise RemoteError(f"cannot reach embedding service at {url}: {last_exc}") from last_exc


def embed_remote(
    texts: list[str],
    endpoint: str,
    model: str,
    normalize: bool = False,
    parallel: int = 4,
    retries: int = 2,
    timeout: float = 60.0,
) -> list[Embedding]:
    """Embed ``texts`` through the remote service, preserving input order."""
    if not texts:
        raise RemoteError("empty batch rejected before wire call")
    chunks = [texts[i : i + MAX_BATCH] for i in range(0, len(texts), MAX_BATCH)]
    with ThreadPoolExecutor(max_workers=max(1, parallel)) as pool:
        results = list(
            pool.map(
                lambda chunk: _post_chunk(endpoint, model, chunk, normalize, retries, timeout),
                chunks,
            )
        )
    rows = [row for chunk in results for row in chunk]
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise RemoteError(f"service returned inconsistent dims across chunks: {sorted(dims)}")
    out = []
    for row in rows:
        vec = np.asarray(row, dtype=np.float64)
        out.append(Embedding(vec, model, degenerate=bool(np.all(vec == 0.0))))
    return out


class RemoteBackend:
    """EmbeddingBackend adapter over :func:`embed_remote`."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        normalize: bool = False,
        parallel: int = 4,
    ):
        self.endpoint = endpoint
        self.model = model
        self.name = model
        self.normalize = normalize
        self.parallel = parallel
        try:
            resp = requests.get(endpoint.rstrip("/") + "/health", timeout=10)
        except requests.RequestException as exc:
            raise RemoteError(f"cannot reach embedding service at {endpoint}: {exc}") from exc
        if resp.status_code != 200:
            raise RemoteError(f"service not healthy: {resp.status_code}")
        self.dim = int(resp.json()["dim"])

    def embed_batch(self, texts: list[str]) -> list[Embedding]:
        out = embed_remote(
            texts,
            self.endpoint,
            self.model,
            normalize=self.normalize,
            parallel=self.parallel,
        )
        for e in out:
            if e.dim != self.dim:
                raise RemoteError(f"embedding dim {e.dim} != /health dim {self.dim}")
        return out
