"""Command-line entry points for the pipeline.

One subcommand per stage: ingest, build-index, map-queries, search,
evaluate, sweep, serve. Each is a thin wrapper over a library operation;
everything printed is deterministic for fixed inputs.

Exit codes: 0 success, 1 operational failure (missing file, bad data),
2 usage errors (argparse's convention).

Defaults can come from a JSON config file given via --config or the
TEMPOSEARCH_CONFIG environment variable; command-line flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import evaluation
from .corpus import load_corpus, load_query_log, load_seed_file
from .index import TemporalTagIndex, build_index, load_index, save_index
from .mapping import (
    MIN_CANDIDATE_FRACTION,
    MIN_CANDIDATE_USERS,
    SCORE_THRESHOLD,
    MappingError,
    build_mapping_corpus,
    load_mappings,
    save_mappings,
)
from .months import TimeWindow
from .search import search_tags
from .service import SearchService, find_mapping, make_server

CONFIG_ENV_VAR = "TEMPOSEARCH_CONFIG"


class CliError(Exception):
    """Operational failure: printed to stderr, exit code 1."""


@dataclass
class Config:
    corpus: str | None = None
    seeds: str | None = None
    logs: tuple[str, ...] = ()
    mappings: str | None = None
    threshold: float = SCORE_THRESHOLD
    min_users: int = MIN_CANDIDATE_USERS
    min_fraction: float = MIN_CANDIDATE_FRACTION
    granularity: str = "host"
    listen: str = "127.0.0.1:8787"

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise CliError(f"threshold must be in (0, 1], got {self.threshold}")
        if self.min_users < 1:
            raise CliError(f"min-users must be >= 1, got {self.min_users}")
        if not 0.0 <= self.min_fraction <= 1.0:
            raise CliError(f"min-fraction must be in [0, 1], got {self.min_fraction}")
        if self.granularity not in evaluation.GRANULARITIES:
            raise CliError(f"granularity must be one of {evaluation.GRANULARITIES}")
        self.logs = tuple(self.logs)

    @classmethod
    def load(cls, args: argparse.Namespace) -> "Config":
        values: dict = {}
        path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
        if path:
            try:
                raw = json.loads(Path(path).read_text(encoding="utf-8"))
            except FileNotFoundError:
                raise CliError(f"config file not found: {path}") from None
            except json.JSONDecodeError as exc:
                raise CliError(f"config file {path} is not valid JSON: {exc}") from None
            known = {f.name for f in fields(cls)}
            unknown = set(raw) - known
            if unknown:
                raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}")
            values.update(raw)
        for field in fields(cls):
            flag = getattr(args, field.name, None)
            if flag is not None and flag != ():
                values[field.name] = flag
        return cls(**values)


def _read_path(path: str | None, kind: str) -> str:
    if not path:
        raise CliError(f"{kind} path is required (flag or config)")
    if not Path(path).is_file():
        raise CliError(f"{kind} file not found: {path}")
    return path


def _load_index_and_stats(config: Config, args) -> tuple[TemporalTagIndex, object]:
    """Index from --index snapshot if given, else built from the corpus."""
    snapshot = getattr(args, "index", None)
    if snapshot:
        return load_index(_read_path(snapshot, "index"))
    corpus = _read_path(config.corpus, "corpus")
    bookmarks, stats = load_corpus(corpus)
    return build_index(bookmarks), stats


def _window_from_args(args, fallback: TimeWindow | None = None) -> TimeWindow:
    start = getattr(args, "window_from", None)
    end = getattr(args, "window_to", None)
    if start is None and end is None and fallback is not None:
        return fallback
    if start is None or end is None:
        raise CliError("--from and --to are both required")
    try:
        return TimeWindow(start, end)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _mapping_corpus(index: TemporalTagIndex, config: Config, args):
    seed_sets = load_seed_file(_read_path(config.seeds, "seeds"))
    try:
        return build_mapping_corpus(
            index,
            seed_sets,
            min_users=config.min_users,
            min_fraction=config.min_fraction,
            global_usage=bool(getattr(args, "global_usage", False)),
        )
    except MappingError as exc:
        raise CliError(str(exc)) from None


def _print_stats(stats) -> None:
    payload = stats.to_dict() if hasattr(stats, "to_dict") else (stats or {})
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def cmd_ingest(config: Config, args) -> int:
    _, stats = load_corpus(_read_path(config.corpus, "corpus"))
    _print_stats(stats)
    return 0


def cmd_build_index(config: Config, args) -> int:
    bookmarks, stats = load_corpus(_read_path(config.corpus, "corpus"))
    index = build_index(bookmarks)
    save_index(index, args.out, stats)
    _print_stats(stats)
    return 0


def cmd_map_queries(config: Config, args) -> int:
    index, _ = _load_index_and_stats(config, args)
    corpus = _mapping_corpus(index, config, args)
    mappings = corpus.map_all(threshold=config.threshold)
    if args.out:
        save_mappings(mappings, args.out)
    for query in sorted(mappings):
        mapping = mappings[query]
        print(f"{query}\t{','.join(sorted(mapping.tags))}")
    return 0


def cmd_search(config: Config, args) -> int:
    index, _ = _load_index_and_stats(config, args)
    window = _window_from_args(args)
    if args.tags:
        tags = frozenset(t for t in (s.strip() for s in args.tags.split(",")) if t)
        if not tags:
            raise CliError("--tags contains no tags")
        response = search_tags(index, tags, window, args.limit)
    elif args.query:
        mappings = load_mappings(_read_path(config.mappings, "mappings"))
        mapping = find_mapping(mappings, args.query)
        if mapping is None:
            raise CliError(f"no mapping for query {args.query!r}")
        response = search_tags(index, mapping.tags, window, args.limit, query=mapping.query)
    else:
        raise CliError("--tags or --query is required")
    if args.json:
        print(json.dumps(response.to_dict(), sort_keys=True, separators=(",", ":")))
        return 0
    print("url\tpost_count\tmatched_tags\tfirst_month\tlast_month")
    for result in response.results:
        print(
            f"{result.url.full}\t{result.post_count}\t"
            f"{','.join(sorted(result.matched_tags))}\t"
            f"{result.first_month}\t{result.last_month}"
        )
    return 0


def _log_records(config: Config, args):
    paths = [args.log] if getattr(args, "log", None) else list(config.logs)
    if not paths:
        raise CliError("a query log is required (--log or config logs)")
    records = []
    for path in paths:
        loaded, _ = load_query_log(_read_path(path, "log"))
        records.extend(loaded)
    return records


def _log_anchor(records) -> TimeWindow:
    months = [r.month for r in records]
    if not months:
        raise CliError("query log contains no usable records")
    return TimeWindow(min(months), max(months))


def cmd_evaluate(config: Config, args) -> int:
    index, _ = _load_index_and_stats(config, args)
    mappings = load_mappings(_read_path(config.mappings, "mappings"))
    records = _log_records(config, args)
    window = _window_from_args(args, fallback=_log_anchor(records))
    report = evaluation.evaluate_all(
        index, mappings, records, window, granularity=config.granularity
    )
    evaluation.write_per_query_csv(report, sys.stdout)
    if args.out_dir:
        evaluation.write_report_files(report, args.out_dir, prefix=args.prefix)
    return 0


def cmd_sweep(config: Config, args) -> int:
    if args.past < 0 or args.future < 0:
        raise CliError("--past and --future must be non-negative")
    index, _ = _load_index_and_stats(config, args)
    mappings = load_mappings(_read_path(config.mappings, "mappings"))
    records = _log_records(config, args)
    anchor = _window_from_args(args, fallback=_log_anchor(records))
    truths = []
    for query in sorted(mappings):
        truth = evaluation.extract_ground_truth(records, query, config.granularity)
        if truth is not None:
            truths.append(truth)
    if not truths:
        raise CliError("no evaluable queries in the log")
    matrix = evaluation.temporal_sweep(
        index, mappings, truths, anchor, args.past, args.future, config.granularity
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            evaluation.write_sweep_csv(matrix, handle)
    else:
        evaluation.write_sweep_csv(matrix, sys.stdout)
    return 0


def cmd_serve(config: Config, args) -> int:
    index, stats = _load_index_and_stats(config, args)
    if config.mappings:
        mappings = load_mappings(_read_path(config.mappings, "mappings"))
    elif config.seeds:
        mappings = _mapping_corpus(index, config, args).map_all(threshold=config.threshold)
    else:
        raise CliError("serve needs mappings (--mappings file) or seeds to map at startup")
    host, _, port = config.listen.rpartition(":")
    if not host or not port.isdigit():
        raise CliError(f"listen address must be host:port, got {config.listen!r}")
    service = SearchService(index, mappings, stats, static_dir=args.static)
    server = make_server(service, host, int(port), verbose=args.verbose)
    actual_port = server.server_address[1]
    print(f"serving on http://{host}:{actual_port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _add_common(parser: argparse.ArgumentParser, *, index_source: bool = False) -> None:
    parser.add_argument("--config", help="JSON config file (or TEMPOSEARCH_CONFIG env var)")
    parser.add_argument("--corpus", help="bookmark TSV file")
    if index_source:
        parser.add_argument("--index", help="index snapshot (alternative to --corpus)")


def _add_window(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--from", dest="window_from", metavar="YYYY-MM")
    parser.add_argument("--to", dest="window_to", metavar="YYYY-MM")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="temposearch",
        description="Temporal tag search over bookmark corpora, with recall evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a corpus and print its stats")
    _add_common(p)

    p = sub.add_parser("build-index", help="build and save an index snapshot")
    _add_common(p)
    p.add_argument("--out", required=True, help="snapshot output path")

    p = sub.add_parser("map-queries", help="map seed-file queries to tags")
    _add_common(p, index_source=True)
    p.add_argument("--seeds", help="seed file (query TAB url,url,...)")
    p.add_argument("--out", help="write mappings to this file")
    p.add_argument("--threshold", type=float)
    p.add_argument("--min-users", dest="min_users", type=int)
    p.add_argument("--min-fraction", dest="min_fraction", type=float)
    p.add_argument("--global-usage", dest="global_usage", action="store_true",
                   help="check the minimum-users filter against global tag usage")

    p = sub.add_parser("search", help="retrieve URLs for tags or a mapped query")
    _add_common(p, index_source=True)
    _add_window(p)
    p.add_argument("--tags", help="comma-separated tags")
    p.add_argument("--query", help="query to look up in --mappings")
    p.add_argument("--mappings", help="mappings file from map-queries")
    p.add_argument("--limit", type=int)
    p.add_argument("--json", action="store_true", help="print the full response as JSON")

    p = sub.add_parser("evaluate", help="per-query recall against a click log")
    _add_common(p, index_source=True)
    _add_window(p)
    p.add_argument("--mappings", help="mappings file")
    p.add_argument("--log", help="query log TSV")
    p.add_argument("--granularity", choices=evaluation.GRANULARITIES)
    p.add_argument("--out-dir", dest="out_dir", help="also write report CSVs here")
    p.add_argument("--prefix", default="recall", help="report file prefix")

    p = sub.add_parser("sweep", help="recall vs window extension matrix")
    _add_common(p, index_source=True)
    _add_window(p)
    p.add_argument("--mappings", help="mappings file")
    p.add_argument("--log", help="query log TSV")
    p.add_argument("--granularity", choices=evaluation.GRANULARITIES)
    p.add_argument("--past", type=int, default=12)
    p.add_argument("--future", type=int, default=12)
    p.add_argument("--out", help="write the matrix CSV here instead of stdout")

    p = sub.add_parser("serve", help="run the HTTP API")
    _add_common(p, index_source=True)
    p.add_argument("--seeds", help="seed file (mapped at startup if no mappings file)")
    p.add_argument("--mappings", help="mappings file")
    p.add_argument("--listen", help="host:port (default 127.0.0.1:8787)")
    p.add_argument("--threshold", type=float)
    p.add_argument("--min-users", dest="min_users", type=int)
    p.add_argument("--min-fraction", dest="min_fraction", type=float)
    p.add_argument("--static", help="serve this directory at / (for the UI)")
    p.add_argument("--verbose", action="store_true")

    return parser


_COMMANDS = {
    "ingest": cmd_ingest,
    "build-index": cmd_build_index,
    "map-queries": cmd_map_queries,
    "search": cmd_search,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = Config.load(args)
        return _COMMANDS[args.command](config, args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
