import numpy as np
import pytest

from metricmatch import (
    Embedding,
    EmbeddingError,
    HashBackend,
    WordVectorBackend,
    embed_average,
    l2_normalize,
    load_word_vectors,
    text_key,
)
from metricmatch.embedding import WordVectorTable


def table(vocab):
    dim = len(next(iter(vocab.values())))
    return WordVectorTable({k: np.asarray(v, dtype=float) for k, v in vocab.items()}, dim)


class TestLoadWordVectors:
    def test_literal_parse(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\na 1 0 0\nb 0 1 0\n")
        t = load_word_vectors(path)
        assert t.dim == 3
        assert np.array_equal(t.vocab["a"], [1, 0, 0])
        assert np.array_equal(t.vocab["b"], [0, 1, 0])

    def test_arity_mismatch_names_token(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("1 3\nbad 1 0\n")
        with pytest.raises(EmbeddingError, match="'bad'"):
            load_word_vectors(path)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("notaheader\na 1 0\n")
        with pytest.raises(EmbeddingError, match="header"):
            load_word_vectors(path)

    def test_non_finite_value(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("1 2\na nan 0\n")
        with pytest.raises(EmbeddingError, match="non-finite"):
            load_word_vectors(path)

    def test_limit(self, tmp_path):
        path = tmp_path / "v.vec"
        lines = ["10 2"] + [f"w{i} {i} {i}" for i in range(10)]
        path.write_text("\n".join(lines) + "\n")
        t = load_word_vectors(path, limit=4)
        assert len(t.vocab) == 4
        assert list(t.vocab) == ["w0", "w1", "w2", "w3"]


class TestEmbedAverage:
    def test_single_word(self):
        t = table({"a": [1, 0, 0]})
        e = embed_average("a", t, set())
        assert np.array_equal(e.values, [1, 0, 0])
        assert not e.degenerate

    def test_two_word_mean(self):
        t = table({"a": [1, 0, 0], "b": [0, 1, 0]})
        e = embed_average("a b", t, set())
        assert np.allclose(e.values, [0.5, 0.5, 0])

    def test_all_oov_is_degenerate_zero(self):
        t = table({"a": [1, 0, 0]})
        e = embed_average("xyz unknown", t, set())
        assert e.degenerate
        assert np.array_equal(e.values, np.zeros(3))

    def test_stopwords_removed_before_average(self):
        t = table({"the": [9, 9], "csp": [1, 1]})
        e = embed_average("the csp", t, {"the"})
        assert np.array_equal(e.values, [1, 1])

    def test_token_order_irrelevant(self):
        t = table({"a": [1, 2], "b": [3, 4], "c": [5, 6]})
        assert np.array_equal(
            embed_average("a b c", t, set()).values,
            embed_average("c a b", t, set()).values,
        )


class TestL2Normalize:
    def test_three_four_five(self):
        e = l2_normalize(Embedding([3.0, 4.0], "t"))
        assert np.allclose(e.values, [0.6, 0.8])

    def test_zero_vector_stays_degenerate(self):
        e = l2_normalize(Embedding([0.0, 0.0], "t"))
        assert e.degenerate
        assert np.array_equal(e.values, [0, 0])

    def test_idempotent(self):
        e = l2_normalize(Embedding([1.0, 2.0, 3.0], "t"))
        again = l2_normalize(e)
        assert np.allclose(e.values, again.values, atol=1e-12)

    def test_scale_invariant(self):
        rng = np.random.default_rng(7)
        v = rng.standard_normal(8)
        for c in (0.001, 3.0, 1e6):
            a = l2_normalize(Embedding(v, "t"))
            b = l2_normalize(Embedding(c * v, "t"))
            assert np.allclose(a.values, b.values, atol=1e-12)


class TestHashBackend:
    def test_deterministic_across_instances(self):
        a = HashBackend(dim=8, seed=1).embed_one("monitor the malware scans")
        b = HashBackend(dim=8, seed=1).embed_one("monitor the malware scans")
        assert np.array_equal(a.values, b.values)

    def test_seed_changes_vectors(self):
        a = HashBackend(dim=8, seed=1).embed_one("monitor")
        b = HashBackend(dim=8, seed=2).embed_one("monitor")
        assert not np.array_equal(a.values, b.values)

    def test_batch_dims_consistent(self, hash_backend):
        out = hash_backend.embed_batch(["one text", "another text", ""])
        assert {e.dim for e in out} == {hash_backend.dim}
        assert out[2].degenerate

    def test_embedding_rejects_non_finite(self):
        with pytest.raises(EmbeddingError):
            Embedding([1.0, float("nan")], "t")


class TestWordVectorBackend:
    def test_empty_table_rejected(self):
        with pytest.raises(EmbeddingError):
            WordVectorBackend(WordVectorTable({}, 3), set())

    def test_batch(self):
        t = table({"csp": [1, 0], "monitor": [0, 1]})
        backend = WordVectorBackend(t, {"the"})
        out = backend.embed_batch(["the csp", "monitor"])
        assert np.array_equal(out[0].values, [1, 0])
        assert np.array_equal(out[1].values, [0, 1])


def test_text_key_is_sha256():
    assert text_key("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
