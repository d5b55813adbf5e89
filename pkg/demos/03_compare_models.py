"""Compare several backends in one table.

Three hash backends with different dimensions stand in for different models;
the smallest one is marked as the baseline so the delta column shows the
improvement of the others over it.
"""

import tempfile
from pathlib import Path

from metricmatch import COSINE, HashBackend, compare, emit, evaluate, load_corpus, rank_all

corpus = load_corpus(Path(__file__).parent.parent / "tests" / "data" / "fixture_corpus.json")

reports = []
for dim in (4, 16, 64):
    backend = HashBackend(dim=dim, seed=0)
    rankings = rank_all(corpus, backend, method=COSINE)
    reports.append(evaluate(rankings, corpus.ground_truth, k=10))

comparison = compare(reports, baseline="hash-d4-s0")

print(f"{'backend':<14} {'nonzero':>8} {'all':>8} {'hits':>5} {'delta':>8}")
for row in comparison.rows:
    print(
        f"{row.backend:<14} {row.mean_nonzero:>8.4f} {row.mean_all:>8.4f} "
        f"{row.nonzero_count:>5d} {row.delta_nonzero:>+8.4f}"
    )

out = Path(tempfile.mkdtemp())
emit(comparison, "csv", out / "comparison.csv")
emit(comparison, "plot-data", out / "plot_nonzero.tsv", mode="nonzero")
print(f"\ntables written to {out}")
