"""FastAPI app serving one embedding model per process.

Wire protocol:
  POST /embed  {"texts": [str, ...], "normalize": bool?}
               -> {"model": str, "dim": int, "embeddings": [[float, ...], ...]}
  GET  /health -> {"status": "ok", "model": str, "dim": int}  (503 until the
               model is loaded)

Model ids starting with ``hash:`` select a deterministic offline encoder
(``hash:16`` gives dimension 16) so the protocol can be exercised without
model weights or network access.
"""

from __future__ import annotations

import hashlib
from contextlib import asynccontextmanager
from typing import Protocol

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

MAX_BATCH = 256


class Encoder(Protocol):
    name: str
    dim: int

    def encode(self, texts: list[str]) -> np.ndarray: ...


class HashEncoder:
    """Deterministic stand-in model: averaged per-token Gaussian vectors
    seeded from SHA-256 of the token."""

    def __init__(self, dim: int):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.name = f"hash:{dim}"

    def encode(self, texts: list[str]) -> np.ndarray:
        rows = []
        for text in texts:
            tokens = text.lower().split()
            if not tokens:
                rows.append(np.zeros(self.dim))
                continue
            vecs = []
            for token in tokens:
                digest = hashlib.sha256(token.encode("utf-8")).digest()
                rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
                vecs.append(rng.standard_normal(self.dim))
            rows.append(np.mean(vecs, axis=0))
        return np.stack(rows)


class SentenceTransformerEncoder:
    def __init__(self, model_name: str):
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(model_name)
        self.name = model_name
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str]) -> np.ndarray:
        return np.asarray(
            self._model.encode(texts, convert_to_numpy=True, normalize_embeddings=False),
            dtype=np.float64,
        )


def load_encoder(model_name: str) -> Encoder:
    if model_name.startswith("hash:"):
        return HashEncoder(int(model_name.split(":", 1)[1]))
    return SentenceTransformerEncoder(model_name)


def create_app(model_name: str, normalize_default: bool = False) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.encoder = load_encoder(model_name)
        yield

    app = FastAPI(lifespan=lifespan)
    app.state.encoder = None

    @app.get("/health")
    def health():
        encoder: Encoder | None = app.state.encoder
        if encoder is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {"status": "ok", "model": encoder.name, "dim": encoder.dim}

    @app.post("/embed")
    async def embed(request: Request):
        encoder: Encoder | None = app.state.encoder
        if encoder is None:
            return JSONResponse(status_code=503, content={"error": "model not loaded"})
        try:
            body = await request.json()
        except ValueError:
            return JSONResponse(status_code=400, content={"error": "body must be JSON"})
        texts = body.get("texts") if isinstance(body, dict) else None
        if not isinstance(texts, list) or not texts or not all(isinstance(t, str) for t in texts):
            return JSONResponse(
                status_code=400, content={"error": "texts must be a nonempty list of strings"}
            )
        if len(texts) > MAX_BATCH:
            return JSONResponse(
                status_code=400, content={"error": f"batch exceeds maximum of {MAX_BATCH}"}
            )
        normalize = bool(body.get("normalize", normalize_default))
        try:
            matrix = encoder.encode(texts)
        except Exception as exc:  # model failure surfaces as 500 with a message
            return JSONResponse(status_code=500, content={"error": str(exc)})
        if normalize:
            norms = np.linalg.norm(matrix, axis=1, keepdims=True)
            norms[norms == 0.0] = 1.0
            matrix = matrix / norms
        return {
            "model": encoder.name,
            "dim": encoder.dim,
            "embeddings": [[float(v) for v in row] for row in matrix],
        }

    return app
