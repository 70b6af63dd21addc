"""Three-level field-of-science taxonomy and seed venue assignments.

Levels 1 and 2 follow the OECD/FORD discipline scheme; level 3 extends it
with journal-classification subfields (Science-Metrix style). The hierarchy
is materialized in the graph as label->parent edges on the L5+ layers, and
seed journal assignments become venue->label edges on L4.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from . import venues
from .errors import DataError
from .graph import VENUE_FOS, MultilayerGraph, NodeKind, hierarchy_layer


class TaxonomyError(DataError):
    """Taxonomy file failed validation; message names the offending row."""


class UnknownLabelError(DataError):
    """Label id not present in the taxonomy."""


@dataclass(frozen=True)
class FosLabel:
    id: str
    name: str
    level: int
    parent: str | None = None


class Taxonomy:
    """Validated label set with parent links (level k>1 -> level k-1)."""

    def __init__(self, labels: list[FosLabel]):
        self.labels: dict[str, FosLabel] = {}
        for label in labels:
            if label.id in self.labels:
                raise TaxonomyError(f"duplicate label id {label.id!r}")
            self.labels[label.id] = label
        self._validate()

    def _validate(self) -> None:
        for label in self.labels.values():
            if label.level not in (1, 2, 3):
                raise TaxonomyError(f"label {label.id!r}: level must be 1..3, got {label.level}")
            if label.level == 1:
                if label.parent:
                    raise TaxonomyError(f"label {label.id!r}: level-1 labels have no parent")
                continue
            if not label.parent:
                raise TaxonomyError(f"label {label.id!r}: level-{label.level} label missing parent")
            parent = self.labels.get(label.parent)
            if parent is None:
                raise TaxonomyError(f"label {label.id!r}: parent {label.parent!r} not defined")
            if parent.level != label.level - 1:
                raise TaxonomyError(
                    f"label {label.id!r}: parent {label.parent!r} is level {parent.level}, "
                    f"expected {label.level - 1}"
                )
        # Parent level is strictly one less than the child's, so parent chains
        # terminate at level 1 and cycles cannot occur.

    def __contains__(self, fos_id: str) -> bool:
        return fos_id in self.labels

    def level_of(self, fos_id: str) -> int:
        if fos_id not in self.labels:
            raise UnknownLabelError(f"unknown label id {fos_id!r}")
        return self.labels[fos_id].level

    def level_counts(self) -> dict[int, int]:
        counts = {1: 0, 2: 0, 3: 0}
        for label in self.labels.values():
            counts[label.level] += 1
        return counts

    def ids_at(self, level: int) -> list[str]:
        return sorted(lid for lid, lab in self.labels.items() if lab.level == level)

    def ancestors(self, fos_id: str) -> list[str]:
        """Ancestor chain in increasing generality; empty for level-1 labels."""
        if fos_id not in self.labels:
            raise UnknownLabelError(f"unknown label id {fos_id!r}")
        chain = []
        cur = self.labels[fos_id]
        while cur.parent is not None:
            chain.append(cur.parent)
            cur = self.labels[cur.parent]
        return chain

    def ancestor_at(self, fos_id: str, level: int) -> str:
        """Unique ancestor of ``fos_id`` at ``level`` (or the label itself)."""
        if fos_id not in self.labels:
            raise UnknownLabelError(f"unknown label id {fos_id!r}")
        cur = self.labels[fos_id]
        if level > cur.level:
            raise ValueError(f"label {fos_id!r} is level {cur.level}, below level {level}")
        while cur.level > level:
            cur = self.labels[cur.parent]
        return cur.id

    def install_hierarchy(self, graph: MultilayerGraph) -> int:
        """Add all labels as nodes and parent links as hierarchy-layer edges.

        Edges run child -> parent; the layer index encodes the parent's level.
        Returns the number of hierarchy edges added.
        """
        for fos_id in sorted(self.labels):
            graph.add_node(NodeKind.FOS, fos_id)
        added = 0
        for fos_id in sorted(self.labels):
            label = self.labels[fos_id]
            if label.parent is None:
                continue
            child = graph.find_node(NodeKind.FOS, fos_id)
            parent = graph.find_node(NodeKind.FOS, label.parent)
            graph.upsert_edge(child, parent, hierarchy_layer(label.level - 1), 1.0)
            added += 1
        return added


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Parse a tab-separated taxonomy file: id, name, level, parent-or-empty."""
    rows: list[FosLabel] = []
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise TaxonomyError(f"{path}: line {lineno}: expected 4 tab-separated fields")
            fos_id, name, level_text, parent = parts
            if not fos_id:
                raise TaxonomyError(f"{path}: line {lineno}: empty label id")
            if fos_id in seen:
                raise TaxonomyError(
                    f"{path}: line {lineno}: duplicate label id {fos_id!r} "
                    f"(first seen on line {seen[fos_id]})"
                )
            seen[fos_id] = lineno
            try:
                level = int(level_text)
            except ValueError:
                raise TaxonomyError(f"{path}: line {lineno}: level {level_text!r} is not an integer")
            rows.append(FosLabel(fos_id, name, level, parent or None))
    try:
        return Taxonomy(rows)
    except TaxonomyError as exc:
        raise TaxonomyError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class SeedAssignment:
    venue_key: str
    fos_id: str
    weight: float = 1.0


@dataclass
class SeedLoadReport:
    rows_read: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)
    excluded: int = 0


def load_exclusions(
    path: str | Path,
    config: venues.VenueNormConfig = venues.DEFAULT_CONFIG,
) -> frozenset[str]:
    """Journal names to keep out of the seed set, one raw name per line.

    Names are compared by canonical key, so any alias of an excluded journal
    matches.
    """
    scratch = venues.VenueAliasMap()
    keys = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            raw = line.strip()
            if not raw:
                continue
            try:
                keys.add(venues.canonicalize(raw, scratch, config))
            except venues.UnresolvableVenueError:
                continue
    return frozenset(keys)


def load_seeds(
    path: str | Path,
    taxonomy: Taxonomy,
    alias_map: venues.VenueAliasMap,
    config: venues.VenueNormConfig = venues.DEFAULT_CONFIG,
    exclude: frozenset[str] | None = None,
) -> tuple[list[SeedAssignment], SeedLoadReport]:
    """Parse seed rows (raw journal name, fos id[, weight]).

    Venue names go through the standard canonicalization; rows naming unknown
    labels or unresolvable venues are skipped and reported; duplicate
    (venue, label) rows merge by summing weights.
    """
    report = SeedLoadReport()
    merged: dict[tuple[str, str], float] = defaultdict(float)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            report.rows_read += 1
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                report.skipped.append((lineno, "expected 2 or 3 tab-separated fields"))
                continue
            raw_name, fos_id = parts[0], parts[1]
            weight = 1.0
            if len(parts) == 3:
                try:
                    weight = float(parts[2])
                except ValueError:
                    report.skipped.append((lineno, f"bad weight {parts[2]!r}"))
                    continue
            if weight <= 0:
                report.skipped.append((lineno, f"non-positive weight {weight}"))
                continue
            if fos_id not in taxonomy:
                report.skipped.append((lineno, f"unknown fos id {fos_id!r}"))
                continue
            try:
                key = venues.canonicalize(raw_name, alias_map, config)
            except venues.UnresolvableVenueError:
                report.skipped.append((lineno, f"unresolvable venue {raw_name!r}"))
                continue
            if exclude and key in exclude:
                report.excluded += 1
                continue
            merged[(key, fos_id)] += weight
    seeds = [
        SeedAssignment(venue_key, fos_id, weight)
        for (venue_key, fos_id), weight in sorted(merged.items())
    ]
    return seeds, report


def install_seeds(
    graph: MultilayerGraph,
    seeds: list[SeedAssignment],
    taxonomy: Taxonomy,
) -> int:
    """Write seed assignments into the graph as L4 edges.

    Weights are sum-normalized per (venue, taxonomy level) so that each
    venue's seed labels at one level form a distribution. Venues missing from
    the graph are added; label nodes must already exist (install_hierarchy).
    Returns the number of L4 edges written.
    """
    by_venue_level: dict[tuple[str, int], list[SeedAssignment]] = defaultdict(list)
    for seed in seeds:
        by_venue_level[(seed.venue_key, taxonomy.level_of(seed.fos_id))].append(seed)
    added = 0
    for (venue_key, _level) in sorted(by_venue_level):
        group = by_venue_level[(venue_key, _level)]
        total = sum(s.weight for s in group)
        venue_id = graph.add_node(NodeKind.VENUE, venue_key)
        for seed in sorted(group, key=lambda s: s.fos_id):
            fos_node = graph.add_node(NodeKind.FOS, seed.fos_id)
            graph.upsert_edge(venue_id, fos_node, VENUE_FOS, seed.weight / total)
            added += 1
    return added
