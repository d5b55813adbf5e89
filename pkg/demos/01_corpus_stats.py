"""Load the fixture corpus and look at its word-count distributions.

Requirement descriptions are markedly longer than metric descriptions, which
is visible even on the small shipped fixture.
"""

from pathlib import Path

from metricmatch import load_corpus, word_count_stats

corpus = load_corpus(Path(__file__).parent.parent / "tests" / "data" / "fixture_corpus.json")

print(f"{len(corpus.requirements)} requirements, {len(corpus.metrics)} metrics")
print(f"{len(corpus.ground_truth.mapping)} requirements have ground-truth metric sets\n")

req_stats, met_stats = word_count_stats(corpus)
for label, stats in (("requirements", req_stats), ("metrics", met_stats)):
    print(f"{label}: n={stats.n}, mean={stats.mean:.2f} words")
    for words, freq in sorted(stats.histogram.items()):
        print(f"  {words:3d} words  {'#' * freq}")
    print()
