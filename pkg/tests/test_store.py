import json

import numpy as np
import pytest

from metricmatch import Embedding, StoreError, store_load, store_save, text_key
from metricmatch.embedding import StoreBackend
from metricmatch.store import store_load_backend


def make_pairs(texts, backend="hash-test", dim=4):
    rng = np.random.default_rng(0)
    return [(text_key(t), Embedding(rng.standard_normal(dim), backend)) for t in texts]


def test_round_trip_bit_exact(tmp_path):
    pairs = make_pairs(["one", "two", "three"])
    path = tmp_path / "store.jsonl"
    store_save(pairs, path)
    loaded = store_load(path)
    assert len(loaded) == 3
    for key, emb in pairs:
        got = loaded[(key, emb.backend)]
        assert np.array_equal(got.values, emb.values)  # bit-exact
        assert got.dim == emb.dim


def test_duplicate_key_on_save(tmp_path):
    emb = Embedding([1.0, 2.0], "b")
    with pytest.raises(StoreError, match="duplicate"):
        store_save([("k", emb), ("k", emb)], tmp_path / "s.jsonl")


def test_duplicate_key_on_load(tmp_path):
    record = json.dumps({"key": "k", "backend": "b", "dim": 1, "values": [1.0]})
    path = tmp_path / "s.jsonl"
    path.write_text(record + "\n" + record + "\n")
    with pytest.raises(StoreError, match="duplicate"):
        store_load(path)


def test_dim_inconsistency_within_backend(tmp_path):
    lines = [
        json.dumps({"key": "a", "backend": "b", "dim": 384, "values": [0.0] * 384}),
        json.dumps({"key": "b", "backend": "b", "dim": 768, "values": [0.0] * 768}),
    ]
    path = tmp_path / "s.jsonl"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(StoreError, match="mixes dims"):
        store_load(path)


def test_corrupt_record_reports_line(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_text('{"key": "a"}\n')
    with pytest.raises(StoreError, match=":1"):
        store_load(path)


def test_declared_dim_must_match_values(tmp_path):
    path = tmp_path / "s.jsonl"
    path.write_text(json.dumps({"key": "a", "backend": "b", "dim": 3, "values": [1.0]}) + "\n")
    with pytest.raises(StoreError, match="declares dim"):
        store_load(path)


def test_two_backends_may_share_a_file(tmp_path):
    lines = [
        json.dumps({"key": "a", "backend": "b1", "dim": 2, "values": [1.0, 2.0]}),
        json.dumps({"key": "a", "backend": "b2", "dim": 3, "values": [1.0, 2.0, 3.0]}),
    ]
    path = tmp_path / "s.jsonl"
    path.write_text("\n".join(lines) + "\n")
    assert len(store_load(path)) == 2
    assert list(store_load_backend(path, "b2")) == ["a"]


def test_store_backend_serves_by_content_hash(tmp_path):
    pairs = make_pairs(["alpha text", "beta text"])
    path = tmp_path / "s.jsonl"
    store_save(pairs, path)
    backend = StoreBackend(store_load_backend(path, "hash-test"), "hash-test")
    out = backend.embed_batch(["beta text", "alpha text"])
    assert np.array_equal(out[0].values, pairs[1][1].values)
    assert np.array_equal(out[1].values, pairs[0][1].values)


def test_store_backend_reports_missing_keys(tmp_path):
    pairs = make_pairs(["alpha text"])
    path = tmp_path / "s.jsonl"
    store_save(pairs, path)
    backend = StoreBackend(store_load_backend(path, "hash-test"), "hash-test")
    from metricmatch import EmbeddingError

    with pytest.raises(EmbeddingError, match="missing"):
        backend.embed_batch(["never embedded"])
