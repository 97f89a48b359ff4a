"""Command-line pipeline: extract, fit-selector, train, evaluate,
experiment, predict, graph-metrics.

Options can come from a JSON config file (``--config``); explicit flags win.
Every command writes its resolved configuration next to its outputs so a run
can be reproduced exactly. Exit codes: 0 success, 1 usage, 2 data error,
3 internal error.
"""

from __future__ import annotations

import argparse
import gzip
import io
import json
import sys
from pathlib import Path

from . import registry
from .corpus import CorpusFormatError, load_corpus, load_graph, parse_rfc3339
from .ml import (
    ALGORITHMS,
    ColumnChecksumError,
    FeatureMatrix,
    TrainedModel,
    evaluate,
    predict,
    run_experiment,
    train,
)
from .netfeat import NETWORK_FEATURE_NAMES, network_features, pagerank
from .pipeline import extract_features
from .postag import pos_tag
from .stylefeat import TrigramSelector, fit_trigram_selector
from .wikitext import parse_wikitext

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_gzip_deterministic(path: Path, text: str) -> None:
    # mtime pinned to zero so reruns are byte-identical.
    buffer = io.BytesIO()
    with gzip.GzipFile(filename="", mode="wb", fileobj=buffer, mtime=0) as gz:
        gz.write(text.encode("utf-8"))
    path.write_bytes(buffer.getvalue())


def _read_maybe_gzip(path: Path) -> str:
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw).decode("utf-8")
    return raw.decode("utf-8")


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill in values from --config for options left at their defaults."""
    if not getattr(args, "config", None):
        return args
    data = json.loads(Path(args.config).read_text())
    if not isinstance(data, dict):
        raise CorpusFormatError(f"{args.config}: config must be a JSON object")
    explicit = {
        opt.lstrip("-").replace("-", "_")
        for opt in sys.argv[1:]
        if opt.startswith("--")
    }
    for key, value in data.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise CorpusFormatError(f"{args.config}: unknown config key {key!r}")
        if dest not in explicit:
            setattr(args, dest, value)
    return args


def _resolved_config(args: argparse.Namespace, command: str) -> dict:
    skip = {"func", "config"}
    payload = {"command": command}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        payload[key] = str(value) if isinstance(value, Path) else value
    return payload


def _corpus_options(sub):
    sub.add_argument("--articles", required=True, help="articles JSON Lines file")
    sub.add_argument("--revisions", required=True, help="revisions JSON Lines file")
    sub.add_argument("--graph", required=True, help="edge list TSV file")
    sub.add_argument("--discussions", help="discussion-count sidecar JSONL")
    sub.add_argument("--snapshots", help="text snapshot sidecar JSONL")
    sub.add_argument("--red-links", help="red-link sidecar JSONL")


def cmd_extract(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    loaded = load_corpus(
        args.articles, args.revisions, args.graph,
        discussions_path=args.discussions,
        snapshots_path=args.snapshots,
        red_links_path=args.red_links,
    )
    selector = None
    if args.selector:
        selector = TrigramSelector.from_json(_read_maybe_gzip(Path(args.selector)))
    now = parse_rfc3339(args.now, Path("--now"), 0)
    result = extract_features(
        loaded, now,
        selector=selector, m=args.m, n=args.n,
        prob_review_max_iterations=args.prob_review_max_iter,
        prob_review_tol=args.prob_review_tol,
        jobs=args.jobs,
    )
    result.matrix.to_csv(out / "features.csv")
    if result.selector is not None:
        (out / "selector.json").write_text(result.selector.to_json() + "\n")
    _write_gzip_deterministic(
        out / "trigram_counts.json.gz",
        json.dumps(result.trigram_counts, sort_keys=True),
    )
    with open(out / "flags.jsonl", "w", encoding="utf-8") as fh:
        for art_id in sorted(result.flags):
            fh.write(json.dumps({"article_id": art_id, "flags": sorted(result.flags[art_id])}) + "\n")
    _write_json(out / "run_config.json", _resolved_config(args, "extract"))
    print(f"wrote {len(result.matrix.ids)} rows x {len(result.matrix.columns)} features to {out}")
    return EXIT_OK


def cmd_fit_selector(args) -> int:
    from .corpus import load_articles

    articles = [a for a in load_articles(args.articles) if a.label is not None]
    if not articles:
        raise CorpusFormatError("no labeled articles; the selector needs training labels")
    tagged = [pos_tag(parse_wikitext(a.wikitext)) for a in articles]
    selector = fit_trigram_selector(tagged, [a.label for a in articles], m=args.m, n=args.n)
    out = Path(args.out)
    out.write_text(selector.to_json() + "\n")
    _write_json(out.with_suffix(out.suffix + ".config.json"),
                _resolved_config(args, "fit-selector"))
    print(f"selector with {len(selector.char_trigrams)} char and "
          f"{len(selector.pos_trigrams)} POS trigrams written to {out}")
    return EXIT_OK


def cmd_train(args) -> int:
    matrix = FeatureMatrix.from_csv(args.matrix)
    params = json.loads(args.params) if args.params else None
    model = train(matrix, args.algo, params=params, seed=args.seed)
    out = Path(args.out)
    model.save(out)
    _write_json(out.with_suffix(out.suffix + ".meta.json"), {
        "format": "wikiquality-model-meta/1",
        "algorithm": model.algorithm,
        "hyperparameters": {k: repr(v) for k, v in model.hyperparameters.items()},
        "seed": model.seed,
        "column_checksum": model.column_checksum,
        "columns": len(model.columns),
        "training_rows": len(matrix.ids),
    })
    _write_json(out.with_suffix(out.suffix + ".config.json"), _resolved_config(args, "train"))
    print(f"trained {args.algo} on {len(matrix.ids)} rows; model written to {out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    matrix = FeatureMatrix.from_csv(args.matrix)
    if matrix.labels is None or any(l is None for l in matrix.labels):
        raise CorpusFormatError(f"{args.matrix}: evaluation requires a label on every row")
    model = TrainedModel.load(args.model)
    metrics = evaluate(matrix.labels, predict(model, matrix))
    line = json.dumps(metrics, sort_keys=True)
    print(line)
    if args.out:
        Path(args.out).write_text(line + "\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    matrix = FeatureMatrix.from_csv(args.matrix)
    if matrix.labels is None or any(l is None for l in matrix.labels):
        raise CorpusFormatError(f"{args.matrix}: experiments require a label on every row")
    trigram_counts = None
    if args.trigram_counts:
        trigram_counts = json.loads(_read_maybe_gzip(Path(args.trigram_counts)))
    groups = [g.strip() for g in args.groups.split(",") if g.strip()]
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    unknown = [a for a in algos if a not in ALGORITHMS]
    if unknown:
        raise CorpusFormatError(f"unknown algorithms: {unknown}")
    result = run_experiment(
        matrix, groups=groups, algos=algos,
        folds=args.folds, seed=args.seed, trigram_counts=trigram_counts,
    )
    result.to_csv(out / "accuracy.csv", "accuracy")
    result.to_csv(out / "mse.csv", "mse")
    (out / "tables.txt").write_text(result.to_text())
    _write_json(out / "run_config.json", _resolved_config(args, "experiment"))
    print(result.to_text())
    return EXIT_OK


def cmd_predict(args) -> int:
    model = TrainedModel.load(args.model)
    matrix = FeatureMatrix.from_csv(args.matrix)
    if args.ids:
        wanted = set(args.ids)
        rows = [i for i, art_id in enumerate(matrix.ids) if art_id in wanted]
        missing = wanted - set(matrix.ids)
        if missing:
            raise CorpusFormatError(f"ids not in matrix: {sorted(missing)[:5]}")
        matrix = matrix.subset_rows(rows)
    labels = predict(model, matrix)
    lines = [
        json.dumps({"id": art_id, "label": label.label})
        for art_id, label in zip(matrix.ids, labels)
    ]
    for line in lines:
        print(line)
    if args.out:
        Path(args.out).write_text("".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_graph_metrics(args) -> int:
    graph = load_graph(args.graph, red_links_path=args.red_links)
    if not graph.nodes:
        raise CorpusFormatError(f"{args.graph}: graph has no nodes")
    ranks = pagerank(graph, damping=args.damping, tol=args.tol, max_iter=args.max_iter)
    feats = network_features(graph, ranks)
    out = Path(args.out)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("node\t" + "\t".join(NETWORK_FEATURE_NAMES) + "\n")
        for node in sorted(feats):
            fh.write(node + "\t" + "\t".join(repr(feats[node][c]) for c in NETWORK_FEATURE_NAMES) + "\n")
    _write_json(out.with_suffix(out.suffix + ".config.json"),
                _resolved_config(args, "graph-metrics"))
    print(f"wrote metrics for {len(feats)} nodes to {out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="wikiquality", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("extract", help="extract the full feature matrix")
    _corpus_options(p)
    p.add_argument("--now", required=True, help="reference instant (RFC 3339) for review features")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--selector", help="reuse a fitted selector JSON instead of fitting")
    p.add_argument("--m", type=int, default=registry.DEFAULT_M)
    p.add_argument("--n", type=int, default=registry.DEFAULT_N)
    p.add_argument("--prob-review-max-iter", type=int, default=100)
    p.add_argument("--prob-review-tol", type=float, default=1e-8)
    p.add_argument("--jobs", type=int, default=1, help="parallel parse workers")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_extract)

    p = subs.add_parser("fit-selector", help="fit the trigram selector on labeled articles")
    p.add_argument("--articles", required=True)
    p.add_argument("--m", type=int, default=registry.DEFAULT_M)
    p.add_argument("--n", type=int, default=registry.DEFAULT_N)
    p.add_argument("--out", required=True, help="selector JSON path")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_fit_selector)

    p = subs.add_parser("train", help="train one classifier on a feature matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--params", help="JSON hyperparameter overrides")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="model file path")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_train)

    p = subs.add_parser("evaluate", help="accuracy and ordinal MSE of a model on a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", help="write metrics JSON here as well")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_evaluate)

    p = subs.add_parser("experiment", help="run the all-features and per-group tables")
    p.add_argument("--matrix", required=True)
    p.add_argument("--trigram-counts", help="trigram_counts.json.gz from extract")
    p.add_argument("--groups", default="Text,Review,Network")
    p.add_argument("--algos", default=",".join(ALGORITHMS))
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_experiment)

    p = subs.add_parser("predict", help="predict quality classes for extracted articles")
    p.add_argument("--model", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--out", help="write JSON Lines predictions here")
    p.add_argument("ids", nargs="*", help="restrict to these article ids")
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_predict)

    p = subs.add_parser("graph-metrics", help="export per-node network metrics as TSV")
    p.add_argument("--graph", required=True)
    p.add_argument("--red-links")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.set_defaults(func=cmd_graph_metrics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args, parser)
        return args.func(args)
    except SystemExit:
        raise
    except (CorpusFormatError, ColumnChecksumError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
