import math

import numpy as np
import pytest

from metricmatch import COSINE, RankedList, dcg_at_k, evaluate, gain, idcg_at_k, ndcg_at_k
from metricmatch.corpus import GroundTruth
from metricmatch.evaluation import EvaluationError, load_report, save_report


def ranking(metric_ids, requirement_id="R1"):
    entries = tuple((mid, 1.0 / (i + 1)) for i, mid in enumerate(metric_ids))
    return RankedList(requirement_id=requirement_id, entries=entries, method=COSINE, backend="t")


def naive_ndcg(ranked_ids, relevant, k):
    """Independent oracle: literal transcription of the three formulas."""

    def naive_dcg(gains):
        total = 0.0
        for i in range(1, len(gains) + 1):
            if i == 1:
                total += gains[0]
            else:
                total += gains[i - 1] / (math.log(i) / math.log(2))
        return total

    gains = [1.0 if mid in relevant else 0.0 for mid in ranked_ids[:k]]
    ideal = naive_dcg([1.0] * min(len(relevant), k))
    return naive_dcg(gains) / ideal


class TestGain:
    def test_member(self):
        assert gain("a", {"a", "b"}) == 1.0

    def test_non_member(self):
        assert gain("c", {"a", "b"}) == 0.0

    def test_empty_set(self):
        assert gain("a", set()) == 0.0


class TestDcg:
    def test_first_position_only(self):
        assert dcg_at_k([1.0] + [0.0] * 9) == 1.0

    def test_third_position(self):
        assert dcg_at_k([0, 0, 1.0] + [0.0] * 7) == pytest.approx(
            0.6309297535714574, abs=1e-12
        )

    def test_positions_one_and_four(self):
        assert dcg_at_k([1.0, 0, 0, 1.0] + [0.0] * 6) == pytest.approx(1.5, abs=1e-12)

    def test_empty(self):
        assert dcg_at_k([]) == 0.0


class TestIdcg:
    def test_one_relevant(self):
        assert idcg_at_k(1, 10) == 1.0

    def test_two_relevant(self):
        assert idcg_at_k(2, 10) == pytest.approx(2.0, abs=1e-12)

    def test_zero_relevant(self):
        assert idcg_at_k(0, 10) == 0.0

    def test_capped_at_k(self):
        assert idcg_at_k(100, 3) == idcg_at_k(3, 3)


class TestNdcg:
    def test_relevant_first(self):
        r = ranking(["a", "b", "c"])
        assert ndcg_at_k(r, {"a"}, k=10) == 1.0

    def test_relevant_second_also_one(self):
        # log2(2) = 1, so position 2 carries no discount
        r = ranking(["b", "a", "c"])
        assert ndcg_at_k(r, {"a"}, k=10) == 1.0

    def test_relevant_third(self):
        r = ranking(["b", "c", "a", "d"])
        assert ndcg_at_k(r, {"a"}, k=10) == pytest.approx(0.6309297535714574, abs=1e-9)

    def test_relevant_eleventh_scores_zero(self):
        r = ranking([f"m{i}" for i in range(10)] + ["a"])
        assert ndcg_at_k(r, {"a"}, k=10) == 0.0

    def test_two_relevant_ranks_one_and_four(self):
        r = ranking(["a", "x", "y", "b"] + [f"m{i}" for i in range(6)])
        assert ndcg_at_k(r, {"a", "b"}, k=10) == pytest.approx(0.75, abs=1e-9)

    def test_empty_relevant_rejected(self):
        with pytest.raises(EvaluationError):
            ndcg_at_k(ranking(["a"]), set(), k=10)

    def test_short_ranking_padded_with_zero_gains(self):
        r = ranking(["x", "y"])
        assert ndcg_at_k(r, {"a"}, k=10) == 0.0

    def test_oracle_equivalence_randomized(self):
        rng = np.random.default_rng(42)
        ids = [f"m{i:02d}" for i in range(30)]
        for _ in range(500):
            order = list(rng.permutation(ids))
            m = int(rng.integers(1, 6))
            relevant = set(rng.choice(ids, size=m, replace=False))
            k = int(rng.integers(1, 11))
            got = ndcg_at_k(ranking(order), relevant, k)
            assert got == pytest.approx(naive_ndcg(order, relevant, k), abs=1e-9)
            assert 0.0 <= got <= 1.0

    def test_monotone_in_relevant_position(self):
        ids = [f"m{i:02d}" for i in range(15)]
        scores = []
        for pos in range(14, 1, -1):  # move the relevant item earlier from rank 15
            order = [i for i in ids if i != "m00"]
            order.insert(pos, "m00")
            scores.append(ndcg_at_k(ranking(order), {"m00"}, k=10))
        assert all(b >= a for a, b in zip(scores, scores[1:]))


class TestEvaluate:
    def truth(self, mapping):
        return GroundTruth({k: frozenset(v) for k, v in mapping.items()})

    def test_simple_aggregation(self):
        rankings = [
            ranking(["a", "b"], "R1"),  # hit at 1 -> 1.0
            ranking(["x", "y"], "R2"),  # miss -> 0.0
        ]
        truth = self.truth({"R1": {"a"}, "R2": {"zz"}})
        report = evaluate(rankings, truth, k=10)
        assert report.mean_nonzero == 1.0
        assert report.mean_all == 0.5
        assert report.nonzero_count == 1
        assert report.nonzero_mean_defined

    def test_all_zero_flags_undefined_mean(self):
        rankings = [ranking(["x"], "R1")]
        report = evaluate(rankings, self.truth({"R1": {"a"}}), k=10)
        assert report.mean_nonzero == 0.0
        assert report.mean_all == 0.0
        assert not report.nonzero_mean_defined

    def test_duplicate_requirement_rejected(self):
        rankings = [ranking(["a"], "R1"), ranking(["a"], "R1")]
        with pytest.raises(EvaluationError, match="duplicate"):
            evaluate(rankings, self.truth({"R1": {"a"}}), k=10)

    def test_requirement_missing_from_truth(self):
        with pytest.raises(EvaluationError, match="missing"):
            evaluate([ranking(["a"], "R9")], self.truth({"R1": {"a"}}), k=10)

    def test_mean_all_times_n_equals_sum(self, corpus, hash_backend):
        from metricmatch import rank_all

        rankings = rank_all(corpus, hash_backend, method=COSINE)
        report = evaluate(rankings, corpus.ground_truth, k=10)
        total = sum(report.per_requirement.values())
        assert report.mean_all * len(report.per_requirement) == pytest.approx(total, abs=1e-12)

    def test_report_round_trip(self, tmp_path, corpus, hash_backend):
        from metricmatch import rank_all

        rankings = rank_all(corpus, hash_backend, method=COSINE)
        report = evaluate(rankings, corpus.ground_truth, k=10)
        path = tmp_path / "report.json"
        save_report(report, path)
        assert load_report(path) == report
