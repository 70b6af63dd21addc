"""Command-line pipeline: build, propagate, classify, evaluate, stats.

Each stage reads and writes plain files, so stages are independently
runnable and testable. Exit codes: 0 success, 1 usage error, 2 data error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from . import metrics, propagate, venues
from .classify import (
    ClassificationRequest,
    Classifier,
    result_from_json,
    result_to_json,
)
from .errors import ConfigError, DataError
from .graph import MultilayerGraph, NodeKind
from .ingest import IngestConfig, ingest_file, parse_records
from .propagate import FosWeightTable, PropagationConfig, coverage_stats, table_from_graph
from .taxonomy import load_seeds, load_taxonomy

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{what} file not found: {p}")
    return p


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


@contextmanager
def _open_out(out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            yield fh
    else:
        yield sys.stdout


def aliases_path_for(graph_path: str | Path) -> Path:
    return Path(str(graph_path) + ".aliases.tsv")


def cmd_build(args) -> int:
    records = _require_file(args.records, "records")
    taxonomy = load_taxonomy(_require_file(args.taxonomy, "taxonomy"))
    alias_map = venues.VenueAliasMap()
    seeds, seed_report = load_seeds(
        _require_file(args.seeds, "seed"), taxonomy, alias_map
    )
    for lineno, reason in seed_report.skipped:
        print(f"seeds: line {lineno}: skipped ({reason})", file=sys.stderr)
    config = IngestConfig(
        threshold=args.threshold, window=args.window, norm_mode=args.norm_mode
    )
    result = ingest_file(records, taxonomy, seeds, config, workers=args.workers)
    for message in result.warnings:
        print(f"records: {message}", file=sys.stderr)
    # fold the seed-name aliases into the saved map
    result.alias_map.merge(alias_map)
    result.graph.save(args.graph)
    result.alias_map.save(aliases_path_for(args.graph))
    _write_or_print(result.stats.to_text(), args.out)
    return EXIT_OK


def cmd_propagate(args) -> int:
    graph = MultilayerGraph.load(_require_file(args.graph, "graph"))
    taxonomy = load_taxonomy(_require_file(args.taxonomy, "taxonomy"))
    config = PropagationConfig(
        rounds=args.rounds,
        keep_top=args.keep_top,
        min_fos_weight=args.min_fos_weight,
    )
    config.validate()
    pre = coverage_stats(table_from_graph(graph, taxonomy))
    table = propagate.run(graph, taxonomy, config)
    table.save(args.table)
    report = propagate.CoverageReport(
        venues_total=graph.node_count(NodeKind.VENUE), pre=pre, post=table.coverage()
    )
    _write_or_print(report.to_text(), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    single_mode = bool(args.id or args.published or args.ref or args.cite)
    if args.records and single_mode:
        raise ConfigError("use either --records (batch) or --id/--published/--ref/--cite (single)")
    if not args.records and not single_mode:
        raise ConfigError("nothing to classify: give --records or single-publication flags")
    if single_mode and not args.id:
        raise ConfigError("single mode needs --id")
    if args.min_score is not None and args.top_t is not None:
        raise ConfigError("choose either --top-t or --min-score, not both")
    top_t = args.top_t if args.min_score is not None else (args.top_t or 1)

    graph = MultilayerGraph.load(_require_file(args.graph, "graph"))
    table = FosWeightTable.load(_require_file(args.table, "table"))
    taxonomy = load_taxonomy(_require_file(args.taxonomy, "taxonomy"))
    alias_file = aliases_path_for(args.graph)
    alias_map = venues.VenueAliasMap.load(alias_file) if alias_file.is_file() else None
    classifier = Classifier(graph, table, taxonomy, alias_map)

    def request_for(pub_id, published, refs, cites):
        return ClassificationRequest(
            publication_id=pub_id,
            strategy=args.strategy,
            published_venues=published,
            reference_venues=refs,
            citation_venues=cites,
            level=args.level,
            top_t=top_t,
            min_score=args.min_score,
        )

    if single_mode:
        request = request_for(args.id, args.published or [], args.ref or [], args.cite or [])
        _write_or_print(result_to_json(classifier.classify(request)) + "\n", args.out)
        return EXIT_OK

    records = _require_file(args.records, "records")
    warnings: list[str] = []
    with _open_out(args.out) as fh:
        for record in parse_records(records, warnings):
            request = request_for(
                record.id,
                record.venues,
                [m.name for m in record.references],
                [m.name for m in record.citations],
            )
            fh.write(result_to_json(classifier.classify(request)) + "\n")
    for message in warnings:
        print(f"records: {message}", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    results_path = _require_file(args.results, "results")
    gold = metrics.load_gold(_require_file(args.gold, "gold"))
    if args.taxonomy:
        taxonomy = load_taxonomy(_require_file(args.taxonomy, "taxonomy"))
        for entry in gold:
            if entry.fos_id not in taxonomy or taxonomy.level_of(entry.fos_id) != args.level:
                raise DataError(
                    f"gold label {entry.fos_id!r} is not a level-{args.level} taxonomy label"
                )
    results = []
    with open(results_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                results.append(result_from_json(line))
    report = metrics.evaluate(results, gold, k=args.top_t)
    _write_or_print(metrics.report_text(report), args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    graph = MultilayerGraph.load(_require_file(args.graph, "graph"))
    lines = []
    for kind in NodeKind:
        lines.append(f"nodes_{kind.value}\t{graph.node_count(kind)}")
    for layer in graph.layers():
        lines.append(f"edges_{layer}\t{graph.edge_count(layer)}")
    for key in sorted(graph.metadata):
        lines.append(f"meta_{key}\t{graph.metadata[key]}")
    if args.table:
        table = FosWeightTable.load(_require_file(args.table, "table"))
        for level, count in sorted(table.coverage().items()):
            lines.append(f"labeled_venues_level_{level}\t{count}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fosgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_workers(p):
        p.add_argument("--workers", type=int, default=1,
                       help="cap on worker processes (default: 1)")

    p = sub.add_parser("build", help="build the venue graph from metadata records")
    p.add_argument("--records", required=True, help="input records, one JSON object per line")
    p.add_argument("--taxonomy", required=True, help="taxonomy file (id, name, level, parent)")
    p.add_argument("--seeds", required=True, help="seed journal assignments (name, fos[, weight])")
    p.add_argument("--graph", required=True, help="output graph file")
    p.add_argument("--out", help="write ingest stats here instead of stdout")
    p.add_argument("--threshold", type=float, default=10.0,
                   help="venue-pair count an edge must exceed to survive (default: 10)")
    p.add_argument("--window", type=int, default=10,
                   help="reference year window in years (default: 10)")
    p.add_argument("--norm-mode", choices=("sum", "max"), default="sum",
                   help="out-weight normalization mode (default: sum)")
    add_workers(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("propagate", help="propagate seed labels across the graph")
    p.add_argument("--graph", required=True, help="input graph file")
    p.add_argument("--taxonomy", required=True, help="taxonomy file")
    p.add_argument("--table", required=True, help="output venue-label weight table")
    p.add_argument("--out", help="write coverage report here instead of stdout")
    p.add_argument("--rounds", type=int, default=2,
                   help="label propagation rounds (default: 2)")
    p.add_argument("--keep-top", type=int, default=5,
                   help="labels kept per venue and level (default: 5)")
    p.add_argument("--min-fos-weight", type=float, default=1e-4,
                   help="prune floor for propagated weights (default: 1e-4)")
    add_workers(p)
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("classify", help="classify publications from metadata records")
    p.add_argument("--graph", required=True, help="input graph file")
    p.add_argument("--table", required=True, help="input venue-label weight table")
    p.add_argument("--taxonomy", required=True, help="taxonomy file")
    p.add_argument("--records", help="publications to classify in batch (JSONL)")
    p.add_argument("--out", help="output results file (default: stdout); one JSON object per line")
    p.add_argument("--id", help="single mode: publication id")
    p.add_argument("--published", action="append", metavar="NAME",
                   help="single mode: published venue name (repeatable)")
    p.add_argument("--ref", action="append", metavar="NAME",
                   help="single mode: referenced venue name (repeatable)")
    p.add_argument("--cite", action="append", metavar="NAME",
                   help="single mode: citing venue name (repeatable)")
    p.add_argument("--strategy", choices=("pub", "ref", "citref"), default="ref",
                   help="classification strategy (default: ref)")
    p.add_argument("--level", type=int, choices=(1, 2, 3), default=3,
                   help="taxonomy level to classify at (default: 3)")
    p.add_argument("--top-t", type=int, default=None,
                   help="keep the T highest-scoring labels (default: 1)")
    p.add_argument("--min-score", type=float, default=None,
                   help="keep labels scoring strictly above this instead of top-T")
    add_workers(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="score classification results against gold labels")
    p.add_argument("--results", required=True, help="classification results (JSONL)")
    p.add_argument("--gold", required=True, help="gold labels (id, fos)")
    p.add_argument("--out", help="write metrics report here instead of stdout")
    p.add_argument("--top-t", type=int, default=1,
                   help="top-k evaluation setting (default: 1)")
    p.add_argument("--taxonomy", help="optional taxonomy file for gold validation")
    p.add_argument("--level", type=int, choices=(1, 2, 3), default=3,
                   help="taxonomy level of the gold labels (default: 3)")
    add_workers(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="print graph and coverage statistics")
    p.add_argument("--graph", required=True, help="input graph file")
    p.add_argument("--table", help="optional weight table for coverage counts")
    p.add_argument("--out", help="write stats here instead of stdout")
    add_workers(p)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
