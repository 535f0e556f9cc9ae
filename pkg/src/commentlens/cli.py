"""Command-line entry point: corpus runs, training, evaluation, serving."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from . import corpus as corpus_mod
from .annotation import load_tasks, make_server
from .categories import (
    CATEGORY_LABELS, canonical_category_label, load_kind_mapping,
    map_syntax_features,
)
from .corpus import (
    CorpusStore, FetchFailed, SampleSpec, ingest, parse_manifest,
    sample_comments,
)
from .metrics import (
    ConfusionMatrix, accuracy, cohens_kappa, fleiss_kappa, format_matrix_report,
    kl_from_counts, matrix_report_json,
)
from .pipeline import ModelBundle
from .records import read_records, write_records
from .training import (
    bootstrap_items, category_dataset, extent_dataset_from_store,
    items_from_records, target_dataset,
)
from .tree import train_model

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_FETCH = 3

logger = logging.getLogger("commentlens")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class DataError(Exception):
    pass


def _bundle_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--extent-model", type=Path, default=None)
    sub.add_argument("--target-model", type=Path, default=None)
    sub.add_argument("--category-model", type=Path, default=None)


def _load_bundle(args: argparse.Namespace) -> ModelBundle:
    try:
        return ModelBundle.load(args.extent_model, args.target_model,
                                args.category_model)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot load model: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="commentlens",
                     description="extract, classify and mine local "
                                 "source-code comments")
    parser.add_argument("-v", "--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("ingest", parents=[], help="build a corpus store")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--language", choices=("all", "java", "python"),
                   default="all")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes; defaults to the core count")
    p.add_argument("--cache", type=Path, default=None)

    p = commands.add_parser("sample", help="seeded random comment sample")
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-file-cap", type=int, default=3)
    p.add_argument("--out", type=Path, required=True)

    p = commands.add_parser("train", help="train a classifier")
    p.add_argument("--task", choices=("extent", "target", "category"),
                   required=True)
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--records", type=Path, default=None,
                   help="labeled records; bootstrap labels when omitted")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--min-examples", type=int, default=10)
    p.add_argument("--word-cap", type=int, default=200)

    p = commands.add_parser("classify", help="run the full pipeline")
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes; defaults to the core count")
    _bundle_args(p)

    p = commands.add_parser("adapt", help="map a model across languages")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--mapping", type=Path, default=None,
                   help="kind mapping TSV; bundled Java->Python by default")
    p.add_argument("--out", type=Path, required=True)

    p = commands.add_parser("stats", help="per-project category ratios")
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--top", type=int, default=10)
    _bundle_args(p)

    p = commands.add_parser("mine", help="verb+noun pairs per project count")
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--category", default="Postcondition")
    p.add_argument("--top", type=int, default=10)
    _bundle_args(p)

    p = commands.add_parser("grep", help="snippets by words and category")
    p.add_argument("--store", type=Path, required=True)
    p.add_argument("--category", default="Postcondition")
    p.add_argument("--words", nargs="+", required=True)
    _bundle_args(p)

    p = commands.add_parser("eval", help="confusion matrix and P/R/F1")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--field", choices=("category", "target"),
                   default="category")
    p.add_argument("--json", action="store_true")

    p = commands.add_parser("agree", help="inter-rater agreement")
    p.add_argument("--sessions", type=Path, nargs="+", required=True)

    p = commands.add_parser("kl", help="category distribution distance")
    p.add_argument("--p", dest="p_file", type=Path, required=True)
    p.add_argument("--q", dest="q_file", type=Path, required=True)
    p.add_argument("--alpha", type=float, default=0.5)

    p = commands.add_parser("annotate", help="serve the annotation UI/API")
    p.add_argument("--tasks", type=Path, required=True,
                   help="sampled records to annotate")
    p.add_argument("--out", type=Path, required=True,
                   help="directory for session files")
    p.add_argument("--serve", action="store_true", required=True)
    p.add_argument("--port", type=int, default=8713)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", type=Path, default=None,
                   help="built frontend assets directory")
    p.add_argument("--context-base", default="")

    return parser


# --- command bodies ---------------------------------------------------------


def _cmd_ingest(args) -> int:
    import os
    try:
        refs = parse_manifest(args.manifest, language=args.language)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    store = ingest(refs, args.store, jobs=jobs, cache_dir=args.cache)
    projects = store.projects()
    for summary in projects:
        print(f"{summary.name}: files={summary.files} sloc={summary.sloc} "
              f"comments={summary.comments} extents={summary.extents} "
              f"skipped={summary.skipped_files}")
    if refs and not projects:
        print("error: no project could be ingested", file=sys.stderr)
        return EXIT_FETCH
    return EXIT_OK


def _cmd_sample(args) -> int:
    store = CorpusStore(args.store)
    spec = SampleSpec(size=args.size, per_file_cap=args.per_file_cap,
                      seed=args.seed)
    records = sample_comments(store, spec)
    write_records(args.out, records)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _cmd_train(args) -> int:
    store = CorpusStore(args.store)
    if not store.projects():
        raise DataError(f"empty corpus store: {args.store}")
    if args.task == "extent":
        dataset = extent_dataset_from_store(store)
        if not dataset.examples:
            raise DataError("no comments found to train on")
        model = train_model(dataset, task="extent",
                            min_examples=args.min_examples)
    else:
        if args.records is not None:
            items = items_from_records(store, read_records(args.records))
        else:
            items = bootstrap_items(store)
        build = target_dataset if args.task == "target" else category_dataset
        dataset, _ = build(items, word_cap=args.word_cap)
        if not dataset.examples:
            raise DataError("no labeled extents found to train on")
        model = train_model(dataset, task=args.task,
                            min_examples=args.min_examples)
    model.save(args.out)
    print(f"trained {args.task} model on {model.training_size} examples -> "
          f"{args.out} (+ rules dump)")
    return EXIT_OK


def _cmd_classify(args) -> int:
    import os
    store = CorpusStore(args.store)
    bundle = _load_bundle(args)
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    count = corpus_mod.classify_store(store, bundle, args.out, jobs=jobs)
    print(f"wrote {count} enriched records under {args.out}")
    return EXIT_OK


def _cmd_adapt(args) -> int:
    from .tree import DecisionTreeModel
    try:
        model = DecisionTreeModel.load(args.model)
        mapping = load_kind_mapping(args.mapping)
        adapted = map_syntax_features(model, mapping)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(str(exc)) from exc
    adapted.save(args.out)
    print(f"adapted model written to {args.out}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    store = CorpusStore(args.store)
    rows = corpus_mod.project_category_stats(store, _load_bundle(args))
    for row in rows[:args.top]:
        ratios = " ".join(f"{label}={value:.2f}"
                          for label, value in sorted(row["ratios"].items(),
                                                     key=lambda i: -i[1]))
        print(f"{row['project']} ({row['total']}): {ratios}")
    return EXIT_OK


def _cmd_mine(args) -> int:
    store = CorpusStore(args.store)
    category = canonical_category_label(args.category)
    ranked = corpus_mod.mine_verb_noun(store, _load_bundle(args),
                                       category=category)
    for (verb, noun), count in ranked[:args.top]:
        print(f"{verb} {noun}\t{count}")
    return EXIT_OK


def _cmd_grep(args) -> int:
    store = CorpusStore(args.store)
    category = canonical_category_label(args.category)
    hits = corpus_mod.grep_classified(store, _load_bundle(args), category,
                                      list(args.words))
    for record, target_text in hits:
        print(f"== {record.project}/{record.path}:{record.span.start_line}")
        print(record.snippet)
        if target_text:
            print(f"-- target: {target_text.strip()}")
        print()
    print(f"{len(hits)} snippet(s)")
    return EXIT_OK


def _labels_by_id(path: Path, field: str) -> dict[str, str]:
    labels: dict[str, str] = {}
    for record in read_records(path):
        value = (record.category_label if field == "category"
                 else record.target_label)
        if value is not None:
            labels[record.record_id] = value
    return labels


def _cmd_eval(args) -> int:
    try:
        gold = _labels_by_id(args.gold, args.field)
        pred = _labels_by_id(args.pred, args.field)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise DataError(str(exc)) from exc
    common = sorted(set(gold) & set(pred))
    if not common:
        raise DataError("no records in common between gold and predictions")
    pairs = [(gold[rid], pred[rid]) for rid in common]
    label_order = [lb for lb in CATEGORY_LABELS
                   if any(lb in pair for pair in pairs)] \
        if args.field == "category" else None
    matrix = ConfusionMatrix.from_pairs(pairs, labels=label_order)
    if args.json:
        print(json.dumps(matrix_report_json(matrix), indent=2))
    else:
        print(format_matrix_report(matrix))
        print(f"\naccuracy: {accuracy(matrix):.3f} over {len(pairs)} records")
    return EXIT_OK


def _cmd_agree(args) -> int:
    sessions: list[dict[str, str]] = []
    for path in args.sessions:
        by_annotator: dict[str, dict[str, str]] = {}
        try:
            for record in read_records(path):
                if record.category_label is None:
                    continue
                key = record.annotator or path.stem
                by_annotator.setdefault(key, {})[record.record_id] = \
                    record.category_label
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(str(exc)) from exc
        sessions.extend(by_annotator.values())
    if len(sessions) < 2:
        raise DataError("need at least two annotation sessions")
    common = sorted(set.intersection(*(set(s) for s in sessions)))
    if not common:
        raise DataError("no common items across sessions")
    categories = sorted({s[rid] for s in sessions for rid in common})
    table = []
    for rid in common:
        row = [0] * len(categories)
        for session in sessions:
            row[categories.index(session[rid])] += 1
        table.append(row)
    kappa = fleiss_kappa(table)
    print(f"items: {len(common)}  raters: {len(sessions)}")
    print(f"fleiss_kappa: {kappa:.4f}")
    if len(sessions) == 2:
        pairs = [(sessions[0][rid], sessions[1][rid]) for rid in common]
        print(f"cohens_kappa: {cohens_kappa(pairs):.4f}")
    return EXIT_OK


def _category_counts(path: Path) -> list[int]:
    from collections import Counter
    counts: Counter = Counter()
    for record in read_records(path):
        if record.category_label is not None:
            counts[record.category_label] += 1
    return [counts.get(label, 0) for label in CATEGORY_LABELS]


def _cmd_kl(args) -> int:
    try:
        p_counts = _category_counts(args.p_file)
        q_counts = _category_counts(args.q_file)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(str(exc)) from exc
    value = kl_from_counts(p_counts, q_counts, alpha=args.alpha)
    print(f"kl_divergence: {value:.4f} nats")
    return EXIT_OK


def _cmd_annotate(args) -> int:
    try:
        tasks = load_tasks(args.tasks)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(str(exc)) from exc
    if not tasks:
        raise DataError("no tasks to annotate")
    server = make_server(tasks, args.out, args.port, host=args.host,
                         static_dir=args.static,
                         context_base=args.context_base)
    host, port = server.server_address[:2]
    print(f"annotation server on http://{host}:{port}/ "
          f"({len(tasks)} tasks); Ctrl-C stops")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "sample": _cmd_sample,
    "train": _cmd_train,
    "classify": _cmd_classify,
    "adapt": _cmd_adapt,
    "stats": _cmd_stats,
    "mine": _cmd_mine,
    "grep": _cmd_grep,
    "eval": _cmd_eval,
    "agree": _cmd_agree,
    "kl": _cmd_kl,
    "annotate": _cmd_annotate,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FetchFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FETCH
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
