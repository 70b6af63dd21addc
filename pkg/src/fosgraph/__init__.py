"""Field-of-science classification over a multilayer venue citation graph.

Workflow: ingest publication metadata into a venue-venue citation graph with
seed venue-field labels, propagate the labels across the graph, then classify
individual publications from their published/referenced/citing venues and
evaluate against gold labels. Each stage is exposed both as a library module
and as a CLI subcommand (``fosgraph build|propagate|classify|evaluate|stats``).
"""

from .classify import ClassificationRequest, ClassificationResult, Classifier, FosScore
from .errors import ConfigError, DataError, FosGraphError
from .graph import (
    PUB_FOS,
    PUB_PUB,
    PUB_VENUE,
    VENUE_FOS,
    VENUE_VENUE,
    MultilayerGraph,
    NodeKind,
    hierarchy_layer,
)
from .ingest import (
    IngestConfig,
    IngestStats,
    PublicationRecord,
    VenueMention,
    apply_year_window,
    build_graph,
    ingest_file,
    parse_records,
)
from .metrics import GoldLabel, MetricsReport, evaluate, load_gold, write_report
from .propagate import (
    FosWeightTable,
    PropagationConfig,
    coverage_stats,
    propagate_round,
    run,
    table_from_graph,
)
from .taxonomy import (
    FosLabel,
    SeedAssignment,
    Taxonomy,
    install_seeds,
    load_seeds,
    load_taxonomy,
)
from .venues import (
    VenueAliasMap,
    VenueNormConfig,
    canonicalize,
    extract_abbreviation,
    preprocess,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationRequest",
    "ClassificationResult",
    "Classifier",
    "ConfigError",
    "DataError",
    "FosGraphError",
    "FosLabel",
    "FosScore",
    "FosWeightTable",
    "GoldLabel",
    "IngestConfig",
    "IngestStats",
    "MetricsReport",
    "MultilayerGraph",
    "NodeKind",
    "PropagationConfig",
    "PublicationRecord",
    "PUB_FOS",
    "PUB_PUB",
    "PUB_VENUE",
    "SeedAssignment",
    "Taxonomy",
    "VenueAliasMap",
    "VenueMention",
    "VenueNormConfig",
    "VENUE_FOS",
    "VENUE_VENUE",
    "apply_year_window",
    "build_graph",
    "canonicalize",
    "coverage_stats",
    "evaluate",
    "extract_abbreviation",
    "hierarchy_layer",
    "ingest_file",
    "install_seeds",
    "load_gold",
    "load_seeds",
    "load_taxonomy",
    "parse_records",
    "preprocess",
    "propagate_round",
    "run",
    "table_from_graph",
    "write_report",
]
