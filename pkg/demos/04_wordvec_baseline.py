"""The baseline path end to end: cleaned tokens, averaged word vectors, and
exact K-d tree nearest-neighbor search.

A toy in-memory word-vector table keeps the demo self-contained; point
load_word_vectors at a real .vec file (FastText-style text format) for the
full-scale baseline.
"""

import numpy as np

from metricmatch import build_kdtree, default_stopwords, embed_average, knn_query, tokenize
from metricmatch.embedding import WordVectorTable

rng = np.random.default_rng(0)
vocab_words = (
    "csp monitor malware protection scans firewall network traffic backup "
    "restore encryption keys logging access authentication training staff"
).split()
table = WordVectorTable({w: rng.standard_normal(8) for w in vocab_words}, 8)
stopwords = default_stopwords()

print("tokenize('The CSP shall monitor anti-malware (scans)!')")
print(" ->", tokenize("The CSP shall monitor anti-malware (scans)!"), "\n")

metric_texts = {
    "MalwareScansMonitored": "malware protection scans are monitored",
    "FirewallTraffic": "firewall restricts the network traffic",
    "BackupRestore": "backup and restore of the keys",
    "AccessLogging": "logging of access and authentication",
}
metric_embs = [
    (mid, embed_average(text, table, stopwords)) for mid, text in metric_texts.items()
]

tree = build_kdtree(metric_embs)
query = embed_average("The CSP shall monitor the malware protection scans", table, stopwords)
result = knn_query(tree, query, k=4, requirement_id="DEMO-1")

print("nearest metrics by Euclidean distance:")
for mid, dist in result.entries:
    print(f"  {dist:7.4f}  {mid}")

degenerate = embed_average("completely unknown vocabulary here", table, stopwords)
print(f"\nall-OOV text -> zero vector, degenerate={degenerate.degenerate}")
