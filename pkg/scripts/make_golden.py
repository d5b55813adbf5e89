#!/usr/bin/env python3
"""One-shot reference script that produces the golden files for the
end-to-end fixture run.

Written independently of the metricmatch package on purpose: it re-derives
tokenization, the deterministic hash embeddings, brute-force rankings, the
nDCG evaluation, and the comparison tables from scratch, then freezes them
under tests/data/golden/. Run once, review, commit; do not regenerate
casually.
"""

import hashlib
import json
import math
import re
import unicodedata
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "tests" / "data" / "fixture_corpus.json"
OUT = ROOT / "tests" / "data" / "golden"

DIM = 16
SEED = 0
BACKEND = f"hash-d{DIM}-s{SEED}"
K = 10

EDGE = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)
LETTER = re.compile(r"[^\W\d_]", re.UNICODE)


def tokens_of(text):
    text = unicodedata.normalize("NFC", text).lower()
    out = []
    for raw in text.split():
        t = EDGE.sub("", raw)
        if t and LETTER.search(t):
            out.append(t)
    return out


def hash_embed(text):
    toks = tokens_of(text)
    if not toks:
        return np.zeros(DIM)
    vecs = []
    for t in toks:
        digest = hashlib.sha256(f"{SEED}:{t}".encode()).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        vecs.append(rng.standard_normal(DIM))
    return np.mean(vecs, axis=0)


def sha_key(text):
    return hashlib.sha256(text.encode()).hexdigest()


def ndcg(ranked_ids, relevant, k):
    def dcg(gains):
        total = 0.0
        for i, g in enumerate(gains, start=1):
            total += g if i == 1 else g / math.log2(i)
        return total

    gains = [1.0 if m in relevant else 0.0 for m in ranked_ids[:k]]
    return dcg(gains) / dcg([1.0] * min(len(relevant), k))


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    doc = json.loads(CORPUS.read_text())
    reqs = doc["requirements"]
    mets = doc["metrics"]
    truth = {m["requirement"]: set(m["metrics"]) for m in doc["mappings"]}

    # --- store.jsonl: requirements then metrics, corpus order, dedup by key
    texts = [r["description"] for r in reqs] + [m["description"] for m in mets]
    lines, seen = [], set()
    emb_by_text = {}
    for t in texts:
        key = sha_key(t)
        emb_by_text[t] = hash_embed(t)
        if key in seen:
            continue
        seen.add(key)
        lines.append(
            json.dumps(
                {
                    "key": key,
                    "backend": BACKEND,
                    "dim": DIM,
                    "values": [float(v) for v in emb_by_text[t]],
                }
            )
        )
    (OUT / "store.jsonl").write_text("\n".join(lines) + "\n")

    met_embs = [(m["id"], emb_by_text[m["description"]]) for m in mets]

    # --- rankings
    def rank_line(req_id, entries, method):
        return json.dumps(
            {
                "requirement": req_id,
                "method": method,
                "backend": BACKEND,
                "ranking": [{"metric": mid, "score": score} for mid, score in entries],
            }
        )

    cosine_lines, knn_lines = [], []
    cosine_rankings, knn_rankings = {}, {}
    for r in reqs:
        q = emb_by_text[r["description"]]
        nq = float(np.linalg.norm(q))
        scored = []
        for mid, mv in met_embs:
            nm = float(np.linalg.norm(mv))
            sim = 0.0 if nq == 0.0 or nm == 0.0 else float(np.dot(q, mv) / (nq * nm))
            scored.append((mid, sim))
        scored.sort(key=lambda p: (-p[1], p[0]))
        cosine_rankings[r["id"]] = [m for m, _ in scored]
        cosine_lines.append(rank_line(r["id"], scored, "cosine"))

        dists = sorted(
            (float(np.sqrt(np.sum((mv - q) ** 2))), mid) for mid, mv in met_embs
        )
        top = [(mid, d) for d, mid in dists[:K]]
        knn_rankings[r["id"]] = [m for m, _ in top]
        knn_lines.append(rank_line(r["id"], top, "euclidean-knn"))
    (OUT / "rankings_cosine.jsonl").write_text("\n".join(cosine_lines) + "\n")
    (OUT / "rankings_knn.jsonl").write_text("\n".join(knn_lines) + "\n")

    # --- evaluation reports
    def make_report(rankings, method):
        per = {rid: ndcg(ids, truth[rid], K) for rid, ids in rankings.items()}
        scores = list(per.values())
        nonzero = [s for s in scores if s > 0.0]
        return {
            "method": method,
            "backend": BACKEND,
            "k": K,
            "per_requirement": per,
            "mean_nonzero": sum(nonzero) / len(nonzero) if nonzero else 0.0,
            "mean_all": sum(scores) / len(scores),
            "nonzero_count": len(nonzero),
            "nonzero_mean_defined": bool(nonzero),
        }

    rep_cos = make_report(cosine_rankings, "cosine")
    rep_knn = make_report(knn_rankings, "euclidean-knn")
    (OUT / "report_cosine.json").write_text(json.dumps(rep_cos, indent=2) + "\n")
    (OUT / "report_knn.json").write_text(json.dumps(rep_knn, indent=2) + "\n")

    # --- comparison: knn report is the baseline (listed first)
    base = rep_knn["mean_nonzero"]
    rows = sorted(
        [rep_knn, rep_cos], key=lambda r: (-r["mean_nonzero"], r["backend"], r["method"])
    )
    csv = ["backend,method,mean_nonzero,mean_all,nonzero_count,delta_nonzero"]
    json_rows = []
    nz_tsv, all_tsv = [], []
    for r in rows:
        delta = r["mean_nonzero"] - base
        csv.append(
            f"{r['backend']},{r['method']},{r['mean_nonzero']:.6f},"
            f"{r['mean_all']:.6f},{r['nonzero_count']},{delta:.6f}"
        )
        json_rows.append(
            {
                "backend": r["backend"],
                "method": r["method"],
                "mean_nonzero": r["mean_nonzero"],
                "mean_all": r["mean_all"],
                "nonzero_count": r["nonzero_count"],
                "delta_nonzero": delta,
            }
        )
        nz_tsv.append(f"{r['backend']}\t{r['mean_nonzero']:.6f}")
        all_tsv.append(f"{r['backend']}\t{r['mean_all']:.6f}")
    (OUT / "comparison.csv").write_text("\n".join(csv) + "\n")
    (OUT / "comparison.json").write_text(
        json.dumps({"k": K, "baseline": BACKEND, "rows": json_rows}, indent=2) + "\n"
    )
    (OUT / "plot_nonzero.tsv").write_text("\n".join(nz_tsv) + "\n")
    (OUT / "plot_all.tsv").write_text("\n".join(all_tsv) + "\n")
    print(f"golden files written to {OUT}")
    print(f"cosine: mean_nonzero={rep_cos['mean_nonzero']:.4f} nonzero={rep_cos['nonzero_count']}")
    print(f"knn:    mean_nonzero={rep_knn['mean_nonzero']:.4f} nonzero={rep_knn['nonzero_count']}")


if __name__ == "__main__":
    main()
