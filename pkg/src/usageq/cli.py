"""Command line for the offline flow: ingest -> mine-aspects -> select ->
sample -> generate -> evaluate, plus serving and dataset utilities.

Exit codes: 0 success, 1 usage, 2 data error, 3 adapter/service error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from pathlib import Path

from . import __version__, harness, pipeline, store
from .annotation import AnnotationService, write_batch_from_candidates
from .aspects import AspectLexicon
from .candidates import load_candidates, sample_per_category, save_candidates
from .config import PipelineConfig
from .corpus import IngestCounters, build_product_index, load_joined, load_reviews, save_joined
from .dataset import DatasetError, load_dataset, save_dataset
from .manifest import write_manifest
from .questions import (
    DEFAULT_TEMPLATES,
    AdapterError,
    ElicitationQuestion,
    HttpAdapter,
    SubprocessAdapter,
    generate_external,
    generate_template,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SERVICE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _slug(category: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in category.lower())


def _load_config(args) -> PipelineConfig:
    if getattr(args, "config", None):
        return PipelineConfig.load(args.config)
    return PipelineConfig()


def _load_lexicons(lexicon_dir: str, categories) -> dict[str, AspectLexicon]:
    out = {}
    for category in categories:
        path = Path(lexicon_dir) / f"aspects_{_slug(category)}.tsv"
        if path.exists():
            out[category] = AspectLexicon.load(path, category)
    return out


def cmd_ingest(args) -> int:
    cfg = _load_config(args)
    index = build_product_index(args.meta, cfg.categories)
    counters = IngestCounters()
    n = save_joined(load_reviews(args.reviews, index, counters), args.out)
    write_manifest(args.out, "ingest", [args.reviews, args.meta], cfg,
                   extra={"counters": counters.summary()})
    print(f"ingested {n} reviews ({counters.total_skipped} skipped: "
          f"{dict(counters.skipped)})")
    return EXIT_OK


def cmd_mine_aspects(args) -> int:
    cfg = _load_config(args)
    min_support = args.min_support or cfg.min_support
    lexicons = pipeline.mine_lexicons(load_joined(args.input), cfg.categories, min_support)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for category, lexicon in lexicons.items():
        lexicon.save(outdir / f"aspects_{_slug(category)}.tsv")
    write_manifest(outdir / "aspects", "mine-aspects", [args.input], cfg,
                   extra={"min_support": min_support})
    sizes = {c: len(l.aspects) for c, l in sorted(lexicons.items())}
    print(f"mined aspect lexicons: {sizes}")
    return EXIT_OK


def cmd_select(args) -> int:
    cfg = _load_config(args)
    lexicons = _load_lexicons(args.lexicons, cfg.categories)
    stats = pipeline.SelectStats()
    require_aspect = cfg.require_aspect and not args.relax_aspect
    n = save_candidates(
        pipeline.iter_candidates(load_joined(args.input), lexicons, require_aspect, stats),
        args.out,
    )
    write_manifest(args.out, "select", [args.input], cfg,
                   extra={"stats": {"reviews": stats.reviews, "sentences": stats.sentences,
                                    "candidates": stats.candidates}})
    print(f"selected {n} candidates from {stats.sentences} sentences "
          f"({stats.reviews} reviews)")
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg = _load_config(args)
    n_per = args.n or cfg.sample_size
    seed = cfg.seed if args.seed is None else args.seed
    by_category = defaultdict(list)
    for cand in load_candidates(args.input):
        by_category[cand.category].append(cand)
    sampled = []
    for category in sorted(by_category):
        sampled.extend(sample_per_category(by_category[category], n_per, seed))
    save_candidates(sampled, args.out)
    write_manifest(args.out, "sample", [args.input], cfg, seed=seed,
                   extra={"per_category": n_per})
    print(f"sampled {len(sampled)} candidates over {len(by_category)} categories")
    return EXIT_OK


def cmd_generate(args) -> int:
    cfg = _load_config(args)
    seed = cfg.seed if args.seed is None else args.seed
    candidates = load_candidates(args.input)
    templates = tuple(cfg.templates) or DEFAULT_TEMPLATES
    stoplist = frozenset(cfg.generic_stoplist) if cfg.generic_stoplist else None
    rows = []
    n_errors = 0
    if args.engine == "template":
        for cand in candidates:
            label = generate_template(cand, templates, seed, stoplist, cfg.category_nouns)
            rows.append(_label_row(cand, label, "template"))
    else:
        adapter = _make_adapter(args, cfg)
        outcomes = generate_external(
            candidates, adapter, cfg.adapter_timeout, cfg.adapter_max_inflight
        )
        for outcome in outcomes:
            if outcome.error is not None:
                n_errors += 1
                rows.append(
                    {
                        "review_id": outcome.candidate.sentence.source_review_id,
                        "sentence_index": outcome.candidate.sentence.index_in_review,
                        "category": outcome.candidate.category,
                        "error": outcome.error,
                        "error_kind": outcome.error_kind,
                    }
                )
            else:
                rows.append(_label_row(outcome.candidate, outcome.label, "external-model"))
        if hasattr(adapter, "close"):
            adapter.close()
    pipeline.save_generated(rows, args.out)
    write_manifest(args.out, "generate", [args.input], cfg, seed=seed,
                   extra={"engine": args.engine, "errors": n_errors})
    n_na = sum(1 for r in rows if r.get("label") == "N/A")
    print(f"generated {len(rows) - n_errors - n_na} questions, {n_na} N/A, "
          f"{n_errors} errors")
    if n_errors and n_errors == len(rows):
        print("every item failed against the adapter", file=sys.stderr)
        return EXIT_SERVICE
    return EXIT_OK


def _label_row(cand, label, provenance) -> dict:
    row = {
        "review_id": cand.sentence.source_review_id,
        "sentence_index": cand.sentence.index_in_review,
        "category": cand.category,
    }
    if label.is_na:
        row["label"] = "N/A"
    else:
        row["label"] = label.question.text
        row["provenance"] = label.question.provenance
        row["flags"] = sorted(label.question.flags)
    return row


def _make_adapter(args, cfg: PipelineConfig):
    command = args.adapter_cmd or cfg.adapter_command
    url = args.adapter_url or cfg.adapter_url
    if command:
        return SubprocessAdapter(command)
    if url:
        return HttpAdapter(url)
    raise AdapterError("adapter engine needs --adapter-cmd or --adapter-url (or config)")


def cmd_evaluate(args) -> int:
    cfg = _load_config(args)
    records, _ = load_dataset(args.references)
    preds = harness.load_predictions(args.predictions)
    report = harness.evaluate(preds, records, args.rouge_mode or cfg.rouge_mode)
    print(report.to_text())
    if args.out:
        report.save(args.out)
        write_manifest(args.out, "evaluate", [args.references, args.predictions], cfg)
    return EXIT_OK


def cmd_reduce(args) -> int:
    cfg = _load_config(args)
    seed = cfg.seed if args.seed is None else args.seed
    records, _ = load_dataset(args.input)
    if args.mode == "fraction":
        rcfg = harness.ReductionConfig.sentence_fraction(args.fraction, seed)
    else:
        rcfg = harness.ReductionConfig.for_question_set(args.mode.upper())
    reduced = harness.reduce_train(records, rcfg)
    save_dataset(reduced, args.out, partial=True)
    write_manifest(args.out, "reduce", [args.input], cfg, seed=seed,
                   extra={"mode": args.mode, "fraction": args.fraction})
    n_q = sum(len(r.questions) for r in reduced)
    print(f"kept {len(reduced)} records, {n_q} questions")
    return EXIT_OK


def cmd_dataset_stats(args) -> int:
    records, stats = load_dataset(args.input)
    print(f"records          {stats.total}")
    print(f"applicable       {stats.n_applicable}")
    print(f"N/A              {stats.n_na} ({100 * stats.na_fraction:.1f}%)")
    print(f"questions        {stats.total_questions}")
    print(f"categories       {len(stats.per_category)}")
    width = max(len(c) for c in stats.per_category)
    print(f"{'category'.ljust(width)}  records  n/a")
    for category in sorted(stats.per_category):
        print(
            f"{category.ljust(width)}  {stats.per_category[category]:7d}  "
            f"{stats.na_per_category.get(category, 0):3d}"
        )
    return EXIT_OK


def _questions_from_rows(rows) -> list[ElicitationQuestion]:
    out = []
    for row in rows:
        label = row.get("label")
        if not label or label == "N/A":
            continue
        out.append(
            ElicitationQuestion(
                text=label,
                category=row["category"],
                source=(row["review_id"], row["sentence_index"]),
                usage_clause="",
                provenance=row.get("provenance", "template"),
                flags=frozenset(row.get("flags", ())),
            )
        )
    return out


def cmd_index(args) -> int:
    cfg = _load_config(args)
    questions = _questions_from_rows(pipeline.load_generated(args.questions))
    include_generic = args.include_generic or cfg.include_generic_in_index
    idx = store.build_index(questions, include_generic)
    store.save_index(idx, args.out)
    write_manifest(args.out, "index", [args.questions], cfg,
                   extra={"entries": len(idx.entries)})
    print(f"indexed {len(idx.entries)} questions, vocabulary {len(idx.vocabulary)}")
    return EXIT_OK


def cmd_query(args) -> int:
    idx = store.load_index(args.index)
    ranked = store.query(idx, args.text, args.category, args.k)
    for entry, score in ranked:
        print(f"{score:.4f}\t{entry.category}\t{entry.text}")
    if not ranked:
        print("(no matches)", file=sys.stderr)
    return EXIT_OK


def cmd_serve_questions(args) -> int:
    from .serving import make_store_server

    cfg = _load_config(args)
    idx = store.load_index(args.index)
    port = args.port or cfg.question_port
    server = make_store_server(idx, port)
    host, actual_port = server.server_address
    print(f"serving question store on http://{host}:{actual_port}/query")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_serve_annotation(args) -> int:
    from .serving import make_annotation_server

    cfg = _load_config(args)
    service = AnnotationService(
        log_path=args.log, lease_seconds=cfg.lease_seconds
    )
    if args.candidates:
        existing = {t.payload.get("record_id") for t in service.tasks()}
        rows = [
            r
            for r in _candidate_rows(args.candidates)
            if f"{r['review_id']}:{r['sentence_index']}" not in existing
        ]
        if rows:
            write_batch_from_candidates(service, rows)
    port = args.port or cfg.annotation_port
    server = make_annotation_server(service, port, args.static)
    host, actual_port = server.server_address
    print(f"serving annotation workbench on http://{host}:{actual_port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        service.close()
    return EXIT_OK


def _candidate_rows(path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    records, _ = load_dataset(args.references)
    runs = []
    for spec_item in args.run:
        label, _, path = spec_item.partition("=")
        if not path:
            raise DatasetError(f"--run needs label=path, got {spec_item!r}")
        preds = harness.load_predictions(path)
        runs.append((label, harness.evaluate(preds, records, cfg.rouge_mode)))
    print(harness.comparison_table(runs))
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="usageq", description=__doc__)
    parser.add_argument("--version", action="version", version=f"usageq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="pipeline config JSON")
        p.set_defaults(func=func)
        return p

    p = add("ingest", cmd_ingest, "join reviews with metadata, filter to categories")
    p.add_argument("--reviews", required=True, help="review JSONL (.gz ok)")
    p.add_argument("--meta", required=True, help="product metadata JSONL (.gz ok)")
    p.add_argument("--out", required=True, help="joined output JSONL")

    p = add("mine-aspects", cmd_mine_aspects, "mine per-category aspect lexicons")
    p.add_argument("--in", dest="input", required=True, help="joined JSONL from ingest")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--min-support", type=int)

    p = add("select", cmd_select, "select candidate sentences (activity + aspect)")
    p.add_argument("--in", dest="input", required=True, help="joined JSONL from ingest")
    p.add_argument("--lexicons", required=True, help="directory from mine-aspects")
    p.add_argument("--out", required=True, help="candidate JSONL")
    p.add_argument("--relax-aspect", action="store_true",
                   help="drop the aspect-pair requirement")

    p = add("sample", cmd_sample, "sample candidates per category")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, help="sample size per category")
    p.add_argument("--seed", type=int)

    p = add("generate", cmd_generate, "turn candidates into questions or N/A")
    p.add_argument("--in", dest="input", required=True, help="candidate JSONL")
    p.add_argument("--engine", choices=("template", "adapter"), default="template")
    p.add_argument("--out", required=True, help="generated questions JSONL")
    p.add_argument("--seed", type=int)
    p.add_argument("--adapter-cmd", nargs="+", help="adapter child process command")
    p.add_argument("--adapter-url", help="adapter HTTP endpoint")

    p = add("evaluate", cmd_evaluate, "score predictions against a dataset TSV")
    p.add_argument("--references", required=True, help="dataset TSV")
    p.add_argument("--predictions", required=True, help="id<TAB>text lines")
    p.add_argument("--out", help="write the report as JSON")
    p.add_argument("--rouge-mode", choices=("f1", "recall"))

    p = add("reduce", cmd_reduce, "training-data reduction (fraction or Q1/Q3/Q5)")
    p.add_argument("--in", dest="input", required=True, help="dataset TSV")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", required=True, choices=("fraction", "q1", "q3", "q5"))
    p.add_argument("--fraction", type=float, default=1.0)
    p.add_argument("--seed", type=int)

    p = add("index", cmd_index, "build the question-store index")
    p.add_argument("--questions", required=True, help="generated questions JSONL")
    p.add_argument("--out", required=True)
    p.add_argument("--include-generic", action="store_true")

    p = add("query", cmd_query, "one-shot similarity query against an index")
    p.add_argument("--index", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--category")
    p.add_argument("--k", type=int, default=5)

    p = add("serve-questions", cmd_serve_questions, "HTTP question retrieval")
    p.add_argument("--index", required=True)
    p.add_argument("--port", type=int)

    p = add("serve-annotation", cmd_serve_annotation, "annotation workbench API + UI")
    p.add_argument("--candidates", help="candidate JSONL to enqueue as step-1 tasks")
    p.add_argument("--log", required=True, help="append-only event log path")
    p.add_argument("--port", type=int)
    p.add_argument("--static", help="directory of UI static files")

    p = add("dataset-stats", cmd_dataset_stats, "per-category dataset statistics")
    p.add_argument("--in", dest="input", required=True, help="dataset TSV")

    p = add("compare", cmd_compare, "metric table across prediction runs")
    p.add_argument("--references", required=True)
    p.add_argument("--run", action="append", required=True,
                   help="label=predictions.tsv (repeatable)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AdapterError as exc:
        print(f"adapter error: {exc}", file=sys.stderr)
        return EXIT_SERVICE
    except (DatasetError, harness.EvalError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
