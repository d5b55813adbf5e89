"""Rank metrics for each requirement with both methods and score the result.

Uses the deterministic hash backend so the demo runs offline and reproduces
the same numbers everywhere. Swap in WordVectorBackend or RemoteBackend for
real embeddings.
"""

from pathlib import Path

from metricmatch import COSINE, EUCLIDEAN_KNN, HashBackend, evaluate, load_corpus, rank_all

corpus = load_corpus(Path(__file__).parent.parent / "tests" / "data" / "fixture_corpus.json")
backend = HashBackend(dim=16, seed=0)

for method in (COSINE, EUCLIDEAN_KNN):
    rankings = rank_all(corpus, backend, method=method, k=10)
    report = evaluate(rankings, corpus.ground_truth, k=10)
    print(f"method={method}")
    print(f"  mean nDCG@10 (non-zero only): {report.mean_nonzero:.4f}")
    print(f"  mean nDCG@10 (all, zeros in): {report.mean_all:.4f}")
    print(f"  requirements with a top-10 hit: {report.nonzero_count}/{len(report.per_requirement)}")
    worst = min(report.per_requirement, key=report.per_requirement.get)
    print(f"  hardest requirement: {worst} (nDCG {report.per_requirement[worst]:.3f})")
    top = rankings[0]
    print(f"  top 3 metrics for {top.requirement_id}:")
    for mid, score in top.entries[:3]:
        print(f"    {score:8.4f}  {mid}")
    print()
