from pathlib import Path

import pytest

from fosgraph.graph import VENUE_VENUE, MultilayerGraph, NodeKind
from fosgraph.taxonomy import FosLabel, SeedAssignment, Taxonomy, install_seeds, load_taxonomy

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def taxonomy_path() -> Path:
    return DATA_DIR / "taxonomy.tsv"


@pytest.fixture(scope="session")
def taxonomy(taxonomy_path) -> Taxonomy:
    return load_taxonomy(taxonomy_path)


@pytest.fixture
def mini_taxonomy() -> Taxonomy:
    """Two top-level fields, three mid-level, five subfields."""
    return Taxonomy(
        [
            FosLabel("h1", "H1", 1),
            FosLabel("h2", "H2", 1),
            FosLabel("g1", "G1", 2, "h1"),
            FosLabel("g2", "G2", 2, "h1"),
            FosLabel("g3", "G3", 2, "h2"),
            FosLabel("f1", "F1", 3, "g1"),
            FosLabel("f2", "F2", 3, "g2"),
            FosLabel("f3", "F3", 3, "g3"),
            FosLabel("f4", "F4", 3, "g3"),
            FosLabel("f5", "F5", 3, "g1"),
        ]
    )


def make_venue_graph(edges: dict[tuple[str, str], float], extra_venues=()) -> MultilayerGraph:
    """Graph with venue nodes and raw L3 weights; not normalized."""
    graph = MultilayerGraph()
    for (src, dst) in sorted(edges):
        graph.add_node(NodeKind.VENUE, src)
        graph.add_node(NodeKind.VENUE, dst)
    for key in extra_venues:
        graph.add_node(NodeKind.VENUE, key)
    for (src, dst), weight in sorted(edges.items()):
        graph.upsert_edge(
            graph.find_node(NodeKind.VENUE, src),
            graph.find_node(NodeKind.VENUE, dst),
            VENUE_VENUE,
            weight,
        )
    return graph


def seeded_graph(taxonomy, edges, seeds, extra_venues=()):
    """Normalized venue graph with hierarchy and seed L4 edges installed."""
    graph = make_venue_graph(edges, extra_venues)
    taxonomy.install_hierarchy(graph)
    graph.normalize_outgoing(VENUE_VENUE, "sum")
    install_seeds(
        graph,
        [SeedAssignment(venue, fos, w) for venue, fos, w in seeds],
        taxonomy,
    )
    return graph
