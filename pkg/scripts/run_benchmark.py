#!/usr/bin/env python3
"""Time graph construction and label propagation on a synthetic corpus.

    python scripts/run_benchmark.py --venues 5000 --records 100000
"""

import argparse
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fosgraph.graph import VENUE_VENUE, NodeKind  # noqa: E402
from fosgraph.ingest import IngestConfig, ingest_file  # noqa: E402
from fosgraph.propagate import PropagationConfig, coverage_stats, run, table_from_graph  # noqa: E402
from fosgraph.synth import CorpusSpec, generate_corpus  # noqa: E402
from fosgraph.taxonomy import load_seeds, load_taxonomy  # noqa: E402
from fosgraph.venues import VenueAliasMap  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--taxonomy", default="tests/data/taxonomy.tsv")
    parser.add_argument("--venues", type=int, default=5000)
    parser.add_argument("--records", type=int, default=100000)
    parser.add_argument("--rounds", type=int, default=2)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    taxonomy = load_taxonomy(args.taxonomy)
    with tempfile.TemporaryDirectory() as tmp:
        t0 = time.perf_counter()
        corpus = generate_corpus(
            tmp, taxonomy,
            CorpusSpec(n_venues=args.venues, n_records=args.records, rng_seed=args.seed),
        )
        t_gen = time.perf_counter() - t0
        print(f"generate: {t_gen:7.2f}s  ({args.records} records, {args.venues} venues)")

        seeds, _ = load_seeds(corpus.seeds_path, taxonomy, VenueAliasMap())
        t0 = time.perf_counter()
        result = ingest_file(
            corpus.records_path, taxonomy, seeds, IngestConfig(), workers=args.workers
        )
        t_build = time.perf_counter() - t0
        graph = result.graph
        print(
            f"build:    {t_build:7.2f}s  "
            f"({graph.node_count(NodeKind.VENUE)} venues, "
            f"{graph.edge_count(VENUE_VENUE)} citation edges, workers={args.workers})"
        )

        pre = coverage_stats(table_from_graph(graph, taxonomy))
        t0 = time.perf_counter()
        table = run(graph, taxonomy, PropagationConfig(rounds=args.rounds))
        t_prop = time.perf_counter() - t0
        post = coverage_stats(table)
        print(f"propagate:{t_prop:7.2f}s  ({args.rounds} rounds)")
        for level in (1, 2, 3):
            print(f"  level {level}: labeled venues {pre[level]} -> {post[level]}")
        print(f"total (build+propagate): {t_build + t_prop:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
