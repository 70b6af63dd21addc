"""Iterative label propagation from seed venues across the citation graph.

Each round, a venue's field weights at one taxonomy level are recomputed as
the citation-weighted aggregate of the field weights of the venues it cites:

    new[i][k] = sum over cited j of  w_L3[i][j] * previous[j][k]

followed by sum-normalization and pruning per venue. Seed values are
replaced, not clamped: a seed venue's labels are re-derived from its
neighborhood every round, except that seeds with no outgoing citation edges
can be preserved (they would otherwise silently vanish).

Two coverage mechanisms are available:

* ``per-level`` (default): every taxonomy level propagates its own seeds
  independently; levels 1 and 2 additionally receive the seed assignments of
  deeper levels mapped through taxonomy parents ("roll-up"), merged in and
  renormalized.
* ``l3-rollup``: only level 3 propagates; levels 1 and 2 are derived entirely
  by rolling the final level-3 table up through taxonomy parents.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DataError
from .graph import VENUE_FOS, VENUE_VENUE, MultilayerGraph, NodeKind, format_weight
from .taxonomy import SeedAssignment, Taxonomy, install_seeds

LEVELS = (1, 2, 3)

Entries = list[tuple[str, float]]

PROPAGATION_MODES = ("per-level", "l3-rollup")


class UnnormalizedGraphError(DataError):
    """Propagation requires the venue-venue layer to have been normalized."""


class EmptySeedError(DataError):
    """No venue carries a seed label at any taxonomy level."""


@dataclass(frozen=True)
class PropagationConfig:
    rounds: int = 2
    keep_top: int = 5
    min_fos_weight: float = 1e-4
    preserve_isolated_seeds: bool = True
    mode: str = "per-level"

    def validate(self) -> None:
        if self.rounds < 1:
            raise ConfigError(f"rounds must be >= 1, got {self.rounds}")
        if self.keep_top < 1:
            raise ConfigError(f"keep_top must be >= 1, got {self.keep_top}")
        if self.min_fos_weight < 0:
            raise ConfigError(f"min_fos_weight must be >= 0, got {self.min_fos_weight}")
        if self.mode not in PROPAGATION_MODES:
            raise ConfigError(f"mode must be one of {PROPAGATION_MODES}, got {self.mode!r}")


class FosWeightTable:
    """Per-venue, per-level field weights, each nonempty entry a distribution.

    Entry lists are sorted by descending weight, ties by ascending label id.
    """

    def __init__(self) -> None:
        self._data: dict[int, dict[str, Entries]] = {}

    def set_entries(self, venue_key: str, level: int, entries: Entries) -> None:
        table = self._data.setdefault(level, {})
        if entries:
            table[venue_key] = sorted(entries, key=lambda e: (-e[1], e[0]))
        else:
            table.pop(venue_key, None)

    def get(self, venue_key: str, level: int) -> Entries:
        return self._data.get(level, {}).get(venue_key, [])

    def level_table(self, level: int) -> dict[str, Entries]:
        return self._data.get(level, {})

    def replace_level(self, level: int, table: dict[str, Entries]) -> None:
        self._data[level] = table

    def copy(self) -> "FosWeightTable":
        dup = FosWeightTable()
        dup._data = {lvl: dict(tbl) for lvl, tbl in self._data.items()}
        return dup

    def venues_at(self, level: int) -> list[str]:
        return sorted(self._data.get(level, {}))

    def coverage(self) -> dict[int, int]:
        """Venues holding at least one label weight, per level."""
        return {level: len(self._data.get(level, {})) for level in LEVELS}

    def is_empty(self) -> bool:
        return not any(self._data.get(level) for level in LEVELS)

    def rows(self):
        for level in sorted(self._data):
            table = self._data[level]
            for venue_key in sorted(table):
                for fos_id, weight in table[venue_key]:
                    yield venue_key, level, fos_id, weight

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for venue_key, level, fos_id, weight in sorted(
                self.rows(), key=lambda r: (r[0], r[1], -r[3], r[2])
            ):
                fh.write(f"{venue_key}\t{level}\t{fos_id}\t{format_weight(weight)}\n")

    @classmethod
    def load(cls, path: str | Path) -> "FosWeightTable":
        table = cls()
        pending: dict[tuple[str, int], Entries] = defaultdict(list)
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 4:
                    raise DataError(f"{path}: line {lineno}: expected 4 tab-separated fields")
                try:
                    level = int(parts[1])
                    weight = float(parts[3])
                except ValueError as exc:
                    raise DataError(f"{path}: line {lineno}: {exc}") from exc
                pending[(parts[0], level)].append((parts[2], weight))
        for (venue_key, level), entries in pending.items():
            table.set_entries(venue_key, level, entries)
        return table

    def allclose(self, other: "FosWeightTable", tol: float = 1e-9) -> bool:
        mine = {(v, l, f): w for v, l, f, w in self.rows()}
        theirs = {(v, l, f): w for v, l, f, w in other.rows()}
        if mine.keys() != theirs.keys():
            return False
        return all(abs(w - theirs[k]) <= tol for k, w in mine.items())


def finalize_entries(acc: dict[str, float], config: PropagationConfig) -> Entries:
    """Turn raw aggregate weights into a pruned distribution.

    Order matters and is fixed: sum-normalize, keep the ``keep_top``
    heaviest (ties by label id), drop entries below ``min_fos_weight``
    (the floor itself survives), renormalize.
    """
    total = sum(acc.values())
    if total <= 0.0:
        return []
    normalized = sorted(((f, w / total) for f, w in acc.items()), key=lambda e: (-e[1], e[0]))
    kept = [
        (f, w)
        for f, w in normalized[: config.keep_top]
        if w >= config.min_fos_weight and w > 0.0
    ]
    kept_total = sum(w for _, w in kept)
    if kept_total <= 0.0:
        return []
    return [(f, w / kept_total) for f, w in kept]


def _require_normalized(graph: MultilayerGraph) -> None:
    if graph.normalized_mode(VENUE_VENUE) is None:
        raise UnnormalizedGraphError(
            "venue-venue layer has not been normalized; run normalize_outgoing first"
        )


def propagate_round(
    graph: MultilayerGraph,
    level: int,
    previous: FosWeightTable,
    config: PropagationConfig = PropagationConfig(),
    seed_venues: set[str] | None = None,
) -> FosWeightTable:
    """One propagation round at one taxonomy level.

    Returns a new table in which only ``level`` is recomputed; other levels
    carry over. A venue with outgoing citation edges gets the weighted
    aggregate of its cited venues' labels (possibly empty if none are
    labeled). Venues in ``seed_venues`` with no outgoing edges keep their
    previous entry when ``config.preserve_isolated_seeds`` is set.
    """
    _require_normalized(graph)
    prev_level = previous.level_table(level)
    new_level: dict[str, Entries] = {}
    for venue_id in graph.node_ids(NodeKind.VENUE):
        neighbors = graph.neighbors(venue_id, VENUE_VENUE)
        if not neighbors:
            continue
        acc: dict[str, float] = {}
        for neighbor_id, edge_w in neighbors:
            for fos_id, fos_w in prev_level.get(graph.node_key(neighbor_id), []):
                acc[fos_id] = acc.get(fos_id, 0.0) + edge_w * fos_w
        entries = finalize_entries(acc, config)
        if entries:
            new_level[graph.node_key(venue_id)] = entries
    if config.preserve_isolated_seeds and seed_venues:
        for venue_key in sorted(seed_venues):
            node = graph.find_node(NodeKind.VENUE, venue_key)
            if node is not None and graph.out_degree(node, VENUE_VENUE) > 0:
                continue
            kept = prev_level.get(venue_key)
            if kept:
                new_level[venue_key] = kept
    result = previous.copy()
    result.replace_level(level, new_level)
    return result


def table_from_graph(graph: MultilayerGraph, taxonomy: Taxonomy) -> FosWeightTable:
    """Read the graph's venue->label edges into a per-level table.

    Each (venue, level) group is sum-normalized; label ids unknown to the
    taxonomy are a data error.
    """
    table = FosWeightTable()
    for venue_id in graph.node_ids(NodeKind.VENUE):
        per_level: dict[int, dict[str, float]] = defaultdict(dict)
        for fos_node, weight in graph.neighbors(venue_id, VENUE_FOS):
            fos_id = graph.node_key(fos_node)
            per_level[taxonomy.level_of(fos_id)][fos_id] = weight
        for level, acc in per_level.items():
            total = sum(acc.values())
            if total <= 0.0:
                continue
            table.set_entries(
                graph.node_key(venue_id), level, [(f, w / total) for f, w in acc.items()]
            )
    return table


def _rollup(
    source: dict[str, Entries],
    to_level: int,
    taxonomy: Taxonomy,
) -> dict[str, dict[str, float]]:
    out: dict[str, dict[str, float]] = defaultdict(dict)
    for venue_key, entries in source.items():
        acc = out[venue_key]
        for fos_id, weight in entries:
            ancestor = taxonomy.ancestor_at(fos_id, to_level)
            acc[ancestor] = acc.get(ancestor, 0.0) + weight
    return out


def _merge_levels(
    direct: dict[str, Entries],
    rolled: dict[str, dict[str, float]],
    config: PropagationConfig,
) -> dict[str, Entries]:
    merged: dict[str, Entries] = {}
    for venue_key in sorted(set(direct) | set(rolled)):
        acc: dict[str, float] = {}
        for fos_id, weight in direct.get(venue_key, []):
            acc[fos_id] = acc.get(fos_id, 0.0) + weight
        for fos_id, weight in sorted(rolled.get(venue_key, {}).items()):
            acc[fos_id] = acc.get(fos_id, 0.0) + weight
        entries = finalize_entries(acc, config)
        if entries:
            merged[venue_key] = entries
    return merged


def run(
    graph: MultilayerGraph,
    taxonomy: Taxonomy,
    config: PropagationConfig = PropagationConfig(),
    seeds: list[SeedAssignment] | None = None,
) -> FosWeightTable:
    """Full propagation: seeds in, final per-level table out.

    The round-0 table is read from the graph's L4 edges (installing ``seeds``
    first if the graph has none). After the configured rounds per level plus
    hierarchy roll-up, the final table is written back into the graph as L4
    edges, replacing the seed edges.
    """
    config.validate()
    if seeds and graph.edge_count(VENUE_FOS) == 0:
        install_seeds(graph, seeds, taxonomy)
    _require_normalized(graph)
    seed_table = table_from_graph(graph, taxonomy)
    if seed_table.is_empty():
        raise EmptySeedError("no seed venue-label assignments present at any level")

    table = seed_table.copy()
    propagated_levels = LEVELS if config.mode == "per-level" else (3,)
    for level in propagated_levels:
        level_seed_venues = set(seed_table.level_table(level))
        for _round in range(config.rounds):
            table = propagate_round(graph, level, table, config, level_seed_venues)

    if config.mode == "per-level":
        # Upper levels also receive the seed assignments of deeper levels,
        # mapped through taxonomy parents and merged with what propagation
        # produced from their own seeds.
        for to_level in (2, 1):
            rolled: dict[str, dict[str, float]] = defaultdict(dict)
            for from_level in range(to_level + 1, 4):
                for venue_key, acc in _rollup(
                    seed_table.level_table(from_level), to_level, taxonomy
                ).items():
                    dest = rolled[venue_key]
                    for fos_id, weight in acc.items():
                        dest[fos_id] = dest.get(fos_id, 0.0) + weight
            table.replace_level(
                to_level, _merge_levels(table.level_table(to_level), rolled, config)
            )
    else:
        final_l3 = table.level_table(3)
        for to_level in (2, 1):
            rolled = _rollup(final_l3, to_level, taxonomy)
            table.replace_level(to_level, _merge_levels({}, rolled, config))

    write_table_to_graph(graph, table)
    return table


def write_table_to_graph(graph: MultilayerGraph, table: FosWeightTable) -> None:
    """Replace the graph's L4 edges with the table contents."""
    graph.clear_layer(VENUE_FOS)
    for venue_key, _level, fos_id, weight in table.rows():
        venue = graph.add_node(NodeKind.VENUE, venue_key)
        fos = graph.add_node(NodeKind.FOS, fos_id)
        graph.upsert_edge(venue, fos, VENUE_FOS, weight)


def coverage_stats(table: FosWeightTable, graph: MultilayerGraph | None = None) -> dict[int, int]:
    """Labeled-venue counts per level; includes total venues under key 0 if a graph is given."""
    counts = table.coverage()
    if graph is not None:
        counts[0] = graph.node_count(NodeKind.VENUE)
    return counts


@dataclass
class CoverageReport:
    venues_total: int
    pre: dict[int, int]
    post: dict[int, int]

    def to_text(self) -> str:
        lines = [f"venues_total\t{self.venues_total}"]
        for level in LEVELS:
            lines.append(
                f"level_{level}\tpre\t{self.pre.get(level, 0)}\tpost\t{self.post.get(level, 0)}"
            )
        return "\n".join(lines) + "\n"
