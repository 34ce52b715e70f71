"""Operator entry points: ingest, rank, stats, query, serve, export.

Exit codes: 0 success, 1 usage error, 2 data error. Tables go to stdout;
--json switches any reporting subcommand to machine-readable output.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AppConfig, load_config
from .corpus import ingest_directory
from .embedding import HashingEmbedder, HttpEmbedder
from .errors import EngineError
from .graph import KnowledgeGraph, export_records, import_records
from .pipeline import FACTOR_MODES, QueryRequest, RetrievalEngine
from .ranking import compute_authority_scores, export_scores
from .reranker import Weights

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="fairuse", description="Precedent retrieval engine")
    parser.add_argument("--config", help="JSON config file (FAIRUSE_* env vars override it)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    ingest = sub.add_parser("ingest", help="build a frozen store from corpus record files")
    ingest.add_argument("--corpus", required=True, help="directory of .jsonl record files")
    ingest.add_argument("--store", required=True, help="output store path")
    ingest.add_argument("--report", help="validation report path (default: <store>.report.json)")

    rank = sub.add_parser("rank", help="compute authority scores")
    rank.add_argument("--store", required=True)
    rank.add_argument("--out", required=True, help="scores output path (JSON lines)")

    stats = sub.add_parser("stats", help="corpus summary")
    stats.add_argument("--store", required=True)
    stats.add_argument("--json", action="store_true")

    query = sub.add_parser("query", help="run one retrieval from the command line")
    query.add_argument("--store", required=True)
    query.add_argument("--text", required=True, help="dispute description")
    query.add_argument("--w-text", type=float, default=None)
    query.add_argument("--w-cit", type=float, default=None)
    query.add_argument("--w-court", type=float, default=None)
    query.add_argument("--k", type=int, default=None)
    query.add_argument("--n", type=int, default=None)
    query.add_argument("--factor-mode", choices=FACTOR_MODES, default=None)
    query.add_argument("--embedder", choices=("reference", "http"), default=None)
    query.add_argument("--json", action="store_true")

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--store", required=True)
    serve.add_argument("--bind", default=None, help="host:port (default from config)")
    serve.add_argument("--embedder", choices=("reference", "http"), default=None)

    export = sub.add_parser("export", help="re-emit a store as corpus records")
    export.add_argument("--store", required=True)
    export.add_argument("--out", help="output path (default: stdout)")
    return parser


def _load_store(path: str) -> KnowledgeGraph:
    store = Path(path)
    if not store.is_file():
        raise EngineError(f"store not found: {store}")
    return import_records(store)


def _make_embedder(config: AppConfig, override: str | None):
    mode = override or config.embedder
    if mode == "http":
        if not config.embedder_endpoint:
            raise EngineError("embedder mode is http but no embedder_endpoint configured")
        return HttpEmbedder(config.embedder_endpoint, config.embedder_dimension)
    return HashingEmbedder(config.embedder_dimension)


def _cmd_ingest(args, config: AppConfig) -> int:
    graph, report = ingest_directory(args.corpus)
    report_path = args.report or f"{args.store}.report.json"
    report.save(report_path)
    if report.ok:
        export_records(graph, args.store)
        stats = report.stats
        print(
            f"ingested {stats.case_count} cases, {stats.opinion_count} opinions, "
            f"{stats.court_count} courts, {report.citation_edges} citation edges"
        )
        if report.auto_created_courts:
            print(f"auto-created courts: {', '.join(report.auto_created_courts)}")
        print(f"report: {report_path}")
        return EXIT_OK
    for problem in report.parse_errors + report.schema_violations:
        print(f"error: {problem}", file=sys.stderr)
    print(f"report: {report_path}", file=sys.stderr)
    return EXIT_DATA


def _cmd_rank(args, config: AppConfig) -> int:
    graph = _load_store(args.store)
    scores = compute_authority_scores(graph)
    count = export_scores(scores, args.out)
    print(f"wrote {count} score records to {args.out} (converged={scores.converged})")
    return EXIT_OK


def _cmd_stats(args, config: AppConfig) -> int:
    graph = _load_store(args.store)
    stats = graph.corpus_stats()
    if args.json:
        print(
            json.dumps(
                {
                    "case_count": stats.case_count,
                    "opinion_count": stats.opinion_count,
                    "court_count": stats.court_count,
                    "year_min": stats.year_min,
                    "year_max": stats.year_max,
                },
                sort_keys=True,
            )
        )
        return EXIT_OK
    span = f"{stats.year_min}-{stats.year_max}" if stats.year_min is not None else "n/a"
    print(f"{'Total Number of Cases':<28} {stats.case_count}")
    print(f"{'Total Number of Opinions':<28} {stats.opinion_count}")
    print(f"{'Time Range Coverage':<28} {span}")
    print(f"{'Number of Unique Courts':<28} {stats.court_count}")
    return EXIT_OK


def _weights(args, config: AppConfig) -> Weights:
    values = (args.w_text, args.w_cit, args.w_court)
    if all(value is None for value in values):
        return Weights(config.w_text, config.w_cit, config.w_court)
    return Weights(*(0.0 if value is None else value for value in values))


def _cmd_query(args, config: AppConfig) -> int:
    graph = _load_store(args.store)
    engine = RetrievalEngine.from_graph(
        graph,
        embedder=_make_embedder(config, args.embedder),
        max_tokens=config.max_tokens,
        pool_size=config.pool_size,
    )
    request = QueryRequest(
        text=args.text,
        weights=_weights(args, config),
        k=args.k if args.k is not None else config.k,
        n=args.n if args.n is not None else config.n,
        factor_mode=args.factor_mode or config.factor_mode,
    )
    response = engine.query(request)
    if args.json:
        from .pipeline import response_to_dict

        print(json.dumps(response_to_dict(response), ensure_ascii=False, sort_keys=True))
        return EXIT_OK
    header = f"{'#':>2}  {'case':<44} {'fused':>7} {'text':>7} {'cit':>7} {'court':>7}"
    print(header)
    print("-" * len(header))
    for result in response.results:
        name = result.case_name if len(result.case_name) <= 42 else result.case_name[:41] + "…"
        print(
            f"{result.rank:>2}  {name + ' (' + str(result.year) + ')':<44} "
            f"{result.fused:>7.4f} {result.text_sim:>7.4f} {result.citation:>7.4f} {result.court:>7.4f}"
        )
    for expansion in response.expansions:
        print(
            f" +  cited by {expansion.source_case_id}: {expansion.case_id} "
            f"(authority {expansion.score:.4f})"
        )
    return EXIT_OK


def _cmd_serve(args, config: AppConfig) -> int:  # pragma: no cover - long-running
    from .service import RequestDefaults, serve

    graph = _load_store(args.store)
    engine = RetrievalEngine.from_graph(
        graph,
        embedder=_make_embedder(config, args.embedder),
        max_tokens=config.max_tokens,
        pool_size=config.pool_size,
    )
    defaults = RequestDefaults(
        weights=Weights(config.w_text, config.w_cit, config.w_court),
        k=config.k,
        n=config.n,
        factor_mode=config.factor_mode,
    )
    serve(engine, args.bind or config.bind, defaults)
    return EXIT_OK


def _cmd_export(args, config: AppConfig) -> int:
    graph = _load_store(args.store)
    if args.out:
        count = export_records(graph, args.out)
        print(f"wrote {count} records to {args.out}")
    else:
        export_records(graph, sys.stdout)
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "rank": _cmd_rank,
    "stats": _cmd_stats,
    "query": _cmd_query,
    "serve": _cmd_serve,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"fairuse: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.subcommand](args, config)
    except EngineError as exc:
        print(f"fairuse: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
