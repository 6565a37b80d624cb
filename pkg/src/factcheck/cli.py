"""Command-line entry points.

Verbs: `run` one (question, response) pair through the pipeline, `eval` a
fact-checker against a benchmark file, `select-data` candidate responses,
`serve` the annotation API and UI, and `export` the annotated benchmark.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import evaluation
from .model import load_documents, serialize_document, validate_dataset
from .pipeline import FactcheckPipeline, PipelineAdapter, PipelineConfig
from .providers import RunMetadata, load_suite, mock_suite, persist_run
from .providers.store import config_hash

logger = logging.getLogger(__name__)


def _build_suite(args):
    if args.config:
        return load_suite(args.config)
    logger.warning("no provider config given; using the deterministic mock suite")
    return mock_suite(default_completion="")


def cmd_run(args) -> int:
    suite = _build_suite(args)
    config = PipelineConfig(strict=args.strict)
    meta = RunMetadata(provider_ids=suite.provider_ids(),
                       config_hash=config_hash(suite.resolved_config)).start()
    pipeline = FactcheckPipeline(suite, config, meta)
    doc = pipeline.run(args.question, args.response, doc_id=args.doc_id)
    meta.finish()
    if suite.cache is not None:
        meta.cache_hits = suite.cache.hits
    record = serialize_document(doc)
    if args.output:
        Path(args.output).write_text(record + "\n", encoding="utf-8")
    else:
        print(record)
    if args.data_dir:
        artifacts = {
            "config.json": json.dumps(suite.resolved_config, indent=2, sort_keys=True),
            "documents.jsonl": record + "\n",
        }
        if doc.revised_response is not None:
            from .revision import merge_revision_record, revision_record_to_dict

            artifacts["revisions.jsonl"] = json.dumps(
                revision_record_to_dict(merge_revision_record(doc)), ensure_ascii=False) + "\n"
        if suite.cache is not None:
            artifacts["cache_manifest.json"] = json.dumps({
                "directory": str(suite.cache.directory),
                "hits": suite.cache.hits,
                "misses": suite.cache.misses,
            }, indent=2)
        run_dir = persist_run(meta, artifacts, args.data_dir)
        print(f"run persisted to {run_dir}", file=sys.stderr)
    return 0


_BUILTIN_ADAPTERS = {
    "always-checkworthy": lambda args: evaluation.AlwaysCheckworthyAdapter(),
    "always-true": lambda args: evaluation.AlwaysTrueAdapter(),
    "always-false": lambda args: evaluation.AlwaysFalseAdapter(),
    "random": lambda args: evaluation.RandomAdapter(seed=args.seed),
    "pipeline": lambda args: PipelineAdapter(_build_suite(args)),
}


def cmd_eval(args) -> int:
    dataset = load_documents(args.dataset)
    if args.adapter.startswith("subprocess:"):
        adapter = evaluation.SubprocessAdapter(args.adapter.split(":", 1)[1].split())
    elif args.adapter in _BUILTIN_ADAPTERS:
        adapter = _BUILTIN_ADAPTERS[args.adapter](args)
    else:
        print(f"unknown adapter {args.adapter!r}; choose one of "
              f"{sorted(_BUILTIN_ADAPTERS)} or subprocess:<command>", file=sys.stderr)
        return 2
    subtasks = args.subtasks.split(",") if args.subtasks else None
    reports = evaluation.run_benchmark(adapter, dataset, subtasks,
                                       macro_over=args.macro_over)
    print(evaluation.format_report_table(reports))
    for report in reports:
        if report.per_label:
            print(f"\n[{report.subtask}]")
            print(evaluation.format_label_table(report))
    if args.output:
        Path(args.output).write_text(evaluation.reports_to_json(reports), encoding="utf-8")
    return 0


def cmd_select_data(args) -> int:
    suite = _build_suite(args)
    candidates = []
    with open(args.candidates, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                candidates.append(evaluation.Candidate(
                    question=obj["question"], response=obj["response"],
                    gold_answer=obj.get("gold_answer")))
    thresholds = evaluation.SelectionThresholds(
        min_response_chars=args.min_chars,
        max_gold_cosine=args.max_cosine,
        max_factscore=args.max_factscore)
    selected = evaluation.select_data(candidates, suite, thresholds)
    out = sys.stdout if not args.output else open(args.output, "w", encoding="utf-8")
    try:
        for candidate in selected:
            out.write(json.dumps({
                "question": candidate.question,
                "response": candidate.response,
                "gold_answer": candidate.gold_answer}, ensure_ascii=False) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"kept {len(selected)}/{len(candidates)} candidates", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.storage import FileBackedWorkflow

    tokens = None
    if args.tokens:
        tokens = json.loads(Path(args.tokens).read_text(encoding="utf-8"))
    workflow = FileBackedWorkflow(args.data_dir)
    app = create_app(workflow, tokens=tokens, static_dir=args.static_dir,
                     evidence_k=args.evidence_k)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_export(args) -> int:
    from .service.storage import FileBackedWorkflow

    workflow = FileBackedWorkflow(args.data_dir)
    docs = workflow.exportable_documents(require_complete=not args.partial)
    if args.strict and docs:
        stats = validate_dataset(docs, strict=True)
        print(f"dataset stats: {stats.as_tuple()}", file=sys.stderr)
    lines = "".join(serialize_document(d) + "\n" for d in docs)
    if args.output:
        Path(args.output).write_text(lines, encoding="utf-8")
    else:
        sys.stdout.write(lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factcheck",
                                     description="claim-level fact-checking toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="fact-check one (question, response) pair")
    p_run.add_argument("--question", required=True)
    p_run.add_argument("--response", required=True)
    p_run.add_argument("--config", help="provider config file (TOML or JSON)")
    p_run.add_argument("--doc-id", default="doc1")
    p_run.add_argument("--output", help="write the benchmark record here")
    p_run.add_argument("--data-dir", help="persist run artifacts under this directory")
    p_run.add_argument("--strict", action="store_true",
                       help="fail on decontextualization lint and unassessed claims")
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval", help="score a fact-checker against a benchmark file")
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--adapter", default="always-checkworthy")
    p_eval.add_argument("--subtasks", help="comma-separated subset, e.g. s1-sentence-cw")
    p_eval.add_argument("--macro-over", choices=["present", "declared"], default="present")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--config", help="provider config (pipeline adapter)")
    p_eval.add_argument("--output", help="write JSON reports here")
    p_eval.set_defaults(func=cmd_eval)

    p_select = sub.add_parser("select-data", help="filter candidate (question, response) pairs")
    p_select.add_argument("--candidates", required=True, help="JSONL of candidates")
    p_select.add_argument("--config")
    p_select.add_argument("--min-chars", type=int, default=200)
    p_select.add_argument("--max-cosine", type=float, default=0.5)
    p_select.add_argument("--max-factscore", type=float, default=0.2)
    p_select.add_argument("--output")
    p_select.set_defaults(func=cmd_select_data)

    p_serve = sub.add_parser("serve", help="run the annotation API and UI")
    p_serve.add_argument("--data-dir", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8400)
    p_serve.add_argument("--tokens", help="JSON file mapping bearer token to annotator id")
    p_serve.add_argument("--static-dir", help="directory with the built UI")
    p_serve.add_argument("--evidence-k", type=int, default=5)
    p_serve.set_defaults(func=cmd_serve)

    p_export = sub.add_parser("export", help="export the annotated benchmark as JSON Lines")
    p_export.add_argument("--data-dir", required=True)
    p_export.add_argument("--output")
    p_export.add_argument("--partial", action="store_true",
                          help="include documents not yet fully consolidated")
    p_export.add_argument("--strict", action="store_true", default=True)
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="[%(levelname)s] %(name)s: %(message)s")
    from .decomposition import DecompositionError
    from .providers.base import ProviderError

    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, DecompositionError, ProviderError) as exc:
        if args.verbose:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
