"""Command-line pipeline: corpus -> embeddings -> rankings -> evaluation -> reports.

Subcommands: ``stats``, ``embed``, ``rank``, ``evaluate``, ``compare``.
Exit codes: 0 ok, 2 input error, 3 backend/network error, 4 consistency error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluation, ranking, report
from .corpus import CorpusError, load_corpus, word_count_stats
from .embedding import (
    EmbeddingError,
    HashBackend,
    StoreBackend,
    WordVectorBackend,
    load_word_vectors,
    text_key,
)
from .preprocess import default_stopwords, load_stopwords
from .store import StoreError, store_load_backend, store_save

EXIT_INPUT = 2
EXIT_BACKEND = 3
EXIT_CONSISTENCY = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _add_shared_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", required=True, help="corpus JSON file")
    p.add_argument("--backend", choices=["wordvec", "store", "remote", "hash"], default="hash")
    p.add_argument("--vectors", help="word-vector .vec file (wordvec backend)")
    p.add_argument("--store", help="embedding store JSONL (store backend / embed output)")
    p.add_argument("--endpoint", help="embedding service URL (remote backend)")
    p.add_argument("--model", help="model name (remote/store backend label)")
    p.add_argument("--method", choices=["cosine", "knn"], default="cosine")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--stopwords", help="stopword file; defaults to the shipped list")
    p.add_argument("--normalize-baseline", action="store_true", dest="normalize")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--parallel", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=16, help="dimension of the hash backend")
    p.add_argument("--config", help="optional JSON config file; flags win over it")


def _stopword_set(args) -> set[str]:
    return load_stopwords(args.stopwords) if args.stopwords else default_stopwords()


def _build_backend(args):
    if args.backend == "hash":
        return HashBackend(dim=args.dim, seed=args.seed)
    if args.backend == "wordvec":
        if not args.vectors:
            raise CliError("--vectors is required for the wordvec backend", EXIT_INPUT)
        table = load_word_vectors(args.vectors)
        return WordVectorBackend(table, _stopword_set(args))
    if args.backend == "store":
        if not args.store or not args.model:
            raise CliError("--store and --model are required for the store backend", EXIT_INPUT)
        try:
            embeddings = store_load_backend(args.store, args.model)
        except StoreError as exc:
            raise CliError(str(exc), EXIT_CONSISTENCY) from exc
        if not embeddings:
            raise CliError(f"store has no records for backend {args.model!r}", EXIT_CONSISTENCY)
        return StoreBackend(embeddings, args.model)
    if args.backend == "remote":
        if not args.endpoint or not args.model:
            raise CliError("--endpoint and --model are required for the remote backend", EXIT_INPUT)
        from .remote import RemoteBackend, RemoteError

        try:
            return RemoteBackend(
                args.endpoint, args.model, normalize=args.normalize, parallel=args.parallel
            )
        except RemoteError as exc:
            raise CliError(str(exc), EXIT_BACKEND) from exc
    raise CliError(f"unknown backend {args.backend!r}", EXIT_INPUT)


def _load_corpus(args):
    try:
        return load_corpus(args.corpus)
    except CorpusError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_stats(args) -> None:
    corpus = _load_corpus(args)
    out = _outdir(args)
    req_stats, met_stats = word_count_stats(corpus)
    for name, stats in (("requirements", req_stats), ("metrics", met_stats)):
        doc = {
            "collection": name,
            "n": stats.n,
            "mean": stats.mean,
            "histogram": {str(k): v for k, v in sorted(stats.histogram.items())},
        }
        (out / f"stats_{name}.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"requirements: n={req_stats.n} mean={req_stats.mean:.2f} words")
    print(f"metrics:      n={met_stats.n} mean={met_stats.mean:.2f} words")


def cmd_embed(args) -> None:
    corpus = _load_corpus(args)
    out = _outdir(args)
    store_path = Path(args.store) if args.store else out / "store.jsonl"
    backend = _build_backend(args)

    existing: dict[str, object] = {}
    if store_path.exists():
        try:
            existing = store_load_backend(store_path, backend.name)
        except StoreError as exc:
            raise CliError(str(exc), EXIT_CONSISTENCY) from exc

    texts = [r.description for r in corpus.requirements] + [m.description for m in corpus.metrics]
    todo, keys = [], []
    seen: set[str] = set()
    for text in texts:
        key = text_key(text)
        if key in existing or key in seen:
            continue
        seen.add(key)
        todo.append(text)
        keys.append(key)

    if todo:
        try:
            embeddings = backend.embed_batch(todo)
        except EmbeddingError as exc:
            raise CliError(str(exc), EXIT_BACKEND) from exc
        pairs = [(key, emb) for key, emb in zip(keys, embeddings)]
        pairs = [(k, existing[k]) for k in existing] + pairs  # keep prior records
        store_save(pairs, store_path)
    print(f"embedded {len(todo)} new text(s) into {store_path} ({len(existing)} already present)")


def cmd_rank(args) -> None:
    corpus = _load_corpus(args)
    out = _outdir(args)
    backend = _build_backend(args)
    method = ranking.COSINE if args.method == "cosine" else ranking.EUCLIDEAN_KNN
    try:
        rankings = ranking.rank_all(
            corpus, backend, method=method, k=args.k, normalize=args.normalize
        )
    except EmbeddingError as exc:
        raise CliError(str(exc), EXIT_CONSISTENCY) from exc
    path = out / "rankings.jsonl"
    ranking.save_rankings(rankings, path)
    print(f"wrote {len(rankings)} ranked list(s) to {path}")


def cmd_evaluate(args) -> None:
    corpus = _load_corpus(args)
    out = _outdir(args)
    try:
        rankings = ranking.load_rankings(args.rankings)
        result = evaluation.evaluate(rankings, corpus.ground_truth, k=args.k)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    except evaluation.EvaluationError as exc:
        raise CliError(str(exc), EXIT_CONSISTENCY) from exc
    path = out / "report.json"
    evaluation.save_report(result, path)
    print(
        f"nDCG@{result.k}: mean_nonzero={result.mean_nonzero:.4f} "
        f"mean_all={result.mean_all:.4f} nonzero={result.nonzero_count}/{len(result.per_requirement)}"
    )


def cmd_compare(args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        reports = [evaluation.load_report(p) for p in args.reports]
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot read report: {exc}", EXIT_INPUT) from exc
    try:
        comparison = report.compare(reports, baseline=args.baseline)
        report.emit(comparison, "csv", out / "comparison.csv")
        report.emit(comparison, "json", out / "comparison.json")
        report.emit(comparison, "plot-data", out / "plot_nonzero.tsv", mode="nonzero")
        report.emit(comparison, "plot-data", out / "plot_all.tsv", mode="all")
    except report.ReportError as exc:
        raise CliError(str(exc), EXIT_CONSISTENCY) from exc
    print(f"compared {len(reports)} report(s); tables in {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricmatch",
        description="Associate security requirements with quantifiable metrics and score the rankings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="word-count distributions of the corpus")
    _add_shared_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("embed", help="embed all descriptions into a store")
    _add_shared_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("rank", help="rank all metrics for each requirement")
    _add_shared_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="score a rankings file against ground truth")
    _add_shared_flags(p)
    p.add_argument("rankings", help="rankings JSONL file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="cross-model comparison tables")
    p.add_argument("reports", nargs="+", help="evaluation report JSON files")
    p.add_argument("--baseline", help="backend name to anchor the delta column")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_compare)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            defaults = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read config {config_path}: {exc}", EXIT_INPUT) from exc
        if not isinstance(defaults, dict):
            raise CliError("config file must hold a JSON object", EXIT_INPUT)
        # config keys are flag names; an explicit flag on the command line wins
        for key, value in defaults.items():
            if f"--{key}" in argv:
                continue
            attr = key.replace("-", "_")
            if attr == "normalize_baseline":
                attr = "normalize"
            if hasattr(args, attr):
                setattr(args, attr, value)
    return args


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, sys.argv[1:] if argv is None else argv)
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
