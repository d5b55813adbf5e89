"""Content-addressed embedding store, JSON Lines on disk.

Keys are the SHA-256 of the embedded text plus the backend name, so an
edited description can never silently reuse a stale vector. Round-trips are
bit-exact: JSON floats are serialized with shortest-round-trip repr.
"""

from __future__ import annotations

import json
from pathlib import Path

from .embedding import Embedding


class StoreError(Exception):
    pass


def store_save(pairs: list[tuple[str, Embedding]], path: str | Path) -> None:
    """Write (key, embedding) pairs as one JSONL record per line.

    Keys must be unique per backend within the file.
    """
    seen: set[tuple[str, str]] = set()
    lines = []
    for key, emb in pairs:
        ident = (key, emb.backend)
        if ident in seen:
            raise StoreError(f"duplicate key {key!r} for backend {emb.backend!r}")
        seen.add(ident)
        lines.append(
            json.dumps(
                {
                    "key": key,
                    "backend": emb.backend,
                    "dim": emb.dim,
                    "values": [float(v) for v in emb.values],
                }
            )
        )
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def store_load(path: str | Path) -> dict[tuple[str, str], Embedding]:
    """Load a JSONL store into a ``(key, backend) -> Embedding`` map.

    Rejects duplicate keys, corrupt records, and dimension inconsistency
    within one backend.
    """
    path = Path(path)
    out: dict[tuple[str, str], Embedding] = {}
    backend_dims: dict[str, int] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                key = record["key"]
                backend = record["backend"]
                dim = record["dim"]
                values = record["values"]
            except (ValueError, KeyError, TypeError) as exc:
                raise StoreError(f"{path}:{lineno}: corrupt record: {exc}") from exc
            if len(values) != dim:
                raise StoreError(
                    f"{path}:{lineno}: record declares dim {dim} but has {len(values)} values"
                )
            known = backend_dims.setdefault(backend, dim)
            if dim != known:
                raise StoreError(
                    f"{path}:{lineno}: backend {backend!r} mixes dims {known} and {dim}"
                )
            ident = (key, backend)
            if ident in out:
                raise StoreError(f"{path}:{lineno}: duplicate key {key!r} for backend {backend!r}")
            out[ident] = Embedding(values, backend)
    return out


def store_load_backend(path: str | Path, backend: str) -> dict[str, Embedding]:
    """Load only the records of one backend, keyed by text hash."""
    return {key: emb for (key, b), emb in store_load(path).items() if b == backend}
