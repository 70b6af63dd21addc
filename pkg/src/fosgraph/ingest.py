"""Publication metadata ingestion and venue-venue graph construction.

Records arrive as newline-delimited JSON objects with fields
``id, title, venues[], year, references[{venue,year}], citations[{venue,year}]``.
For every record, each (published venue, referenced venue) pair and each
(citing venue, published venue) pair bumps an L3 tally by one. Venue names
are deduplicated before counting; tallies are thresholded (strictly-greater
survives), normalized, and seed venue->label edges are installed.

Counting is a commutative fold over records, so the optional multi-process
path chunks the input file, tallies per worker, and merges; the assembled
graph is byte-identical regardless of worker count because node and edge
insertion happens in sorted order afterwards.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import venues
from .graph import VENUE_VENUE, MultilayerGraph, NodeKind
from .taxonomy import SeedAssignment, Taxonomy, install_seeds

log = logging.getLogger(__name__)

PLAUSIBLE_YEARS = range(1800, 2101)


@dataclass
class VenueMention:
    name: str
    year: int | None = None


@dataclass
class PublicationRecord:
    id: str
    year: int
    title: str | None = None
    venues: list[str] = field(default_factory=list)
    references: list[VenueMention] = field(default_factory=list)
    citations: list[VenueMention] = field(default_factory=list)


@dataclass
class IngestConfig:
    threshold: float = 10.0
    window: int = 10
    norm_mode: str = "sum"


@dataclass
class IngestStats:
    records_read: int = 0
    records_skipped: int = 0
    venues_resolved: int = 0
    venues_unresolved: int = 0
    raw_edge_count: int = 0
    edges_after_threshold: int = 0
    references_dropped_by_window: int = 0

    def add(self, other: "IngestStats") -> None:
        for f in dataclasses.fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def to_text(self) -> str:
        lines = [f"{f.name}\t{getattr(self, f.name)}" for f in dataclasses.fields(self)]
        return "\n".join(lines) + "\n"


def _mentions_from_json(value, what: str) -> list[VenueMention]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ValueError(f"{what} must be a list")
    out = []
    for entry in value:
        if not isinstance(entry, dict) or not isinstance(entry.get("venue"), str):
            raise ValueError(f"{what} entries need a string 'venue' field")
        year = entry.get("year")
        if year is not None and not isinstance(year, int):
            raise ValueError(f"{what} entry year must be an integer or null")
        out.append(VenueMention(entry["venue"], year))
    return out


def record_from_json(obj: dict) -> PublicationRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        raise ValueError("record needs a non-empty string 'id'")
    year = obj.get("year")
    if not isinstance(year, int) or year not in PLAUSIBLE_YEARS:
        raise ValueError(f"record year must be an integer in 1800..2100, got {year!r}")
    title = obj.get("title")
    if title is not None and not isinstance(title, str):
        raise ValueError("record title must be a string or null")
    names = obj.get("venues") or []
    if not isinstance(names, list) or not all(isinstance(v, str) for v in names):
        raise ValueError("record venues must be a list of strings")
    return PublicationRecord(
        id=rec_id,
        year=year,
        title=title,
        venues=list(names),
        references=_mentions_from_json(obj.get("references"), "references"),
        citations=_mentions_from_json(obj.get("citations"), "citations"),
    )


def parse_records(path: str | Path, warnings: list[str] | None = None):
    """Yield records from a JSONL file, skipping malformed lines with a warning."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield record_from_json(json.loads(line))
            except (json.JSONDecodeError, ValueError) as exc:
                message = f"line {lineno}: skipped malformed record ({exc})"
                log.warning("%s: %s", path, message)
                if warnings is not None:
                    warnings.append(message)


def apply_year_window(record: PublicationRecord, window: int = 10) -> PublicationRecord:
    """Drop references older than ``window`` years before the publication.

    A reference dated exactly ``window`` years back is kept; references with
    no year are kept (missing data is not evidence of age); citations are
    never filtered.
    """
    kept = [
        m for m in record.references
        if m.year is None or record.year - m.year <= window
    ]
    if len(kept) == len(record.references):
        return record
    return dataclasses.replace(record, references=kept)


class _TallyState:
    """Per-pass accumulation shared by the serial and worker paths."""

    def __init__(self, config: IngestConfig, alias_map: venues.VenueAliasMap):
        self.config = config
        self.alias_map = alias_map
        self.pair_counts: Counter[tuple[str, str]] = Counter()
        self.venue_keys: set[str] = set()
        self.stats = IngestStats()

    def _resolve(self, raw: str) -> str | None:
        try:
            key = venues.canonicalize(raw, self.alias_map)
        except venues.UnresolvableVenueError:
            self.stats.venues_unresolved += 1
            return None
        self.stats.venues_resolved += 1
        return key

    def consume(self, record: PublicationRecord) -> None:
        self.stats.records_read += 1
        windowed = apply_year_window(record, self.config.window)
        self.stats.references_dropped_by_window += (
            len(record.references) - len(windowed.references)
        )
        pub_keys = sorted({k for k in (self._resolve(v) for v in record.venues) if k})
        if not pub_keys:
            self.stats.records_skipped += 1
            return
        self.venue_keys.update(pub_keys)
        for mention in windowed.references:
            key = self._resolve(mention.name)
            if key is None:
                continue
            self.venue_keys.add(key)
            for pub in pub_keys:
                self.pair_counts[(pub, key)] += 1
        for mention in windowed.citations:
            key = self._resolve(mention.name)
            if key is None:
                continue
            self.venue_keys.add(key)
            for pub in pub_keys:
                self.pair_counts[(key, pub)] += 1

    def merge(self, other: "_TallyState") -> None:
        self.pair_counts.update(other.pair_counts)
        self.venue_keys.update(other.venue_keys)
        self.stats.add(other.stats)
        self.alias_map.merge(other.alias_map)


def _assemble(
    state: _TallyState,
    taxonomy: Taxonomy,
    seeds: list[SeedAssignment],
    config: IngestConfig,
) -> tuple[MultilayerGraph, IngestStats]:
    graph = MultilayerGraph()
    for key in sorted(state.venue_keys | {s.venue_key for s in seeds}):
        graph.add_node(NodeKind.VENUE, key)
    taxonomy.install_hierarchy(graph)
    for (src_key, dst_key), count in sorted(state.pair_counts.items()):
        src = graph.find_node(NodeKind.VENUE, src_key)
        dst = graph.find_node(NodeKind.VENUE, dst_key)
        graph.upsert_edge(src, dst, VENUE_VENUE, float(count))
    stats = state.stats
    stats.raw_edge_count = len(state.pair_counts)
    graph.prune_layer(VENUE_VENUE, config.threshold)
    stats.edges_after_threshold = graph.edge_count(VENUE_VENUE)
    graph.normalize_outgoing(VENUE_VENUE, config.norm_mode)
    install_seeds(graph, seeds, taxonomy)
    graph.metadata.update(
        {
            "threshold": repr(config.threshold),
            "year_window": str(config.window),
            "norm_mode": config.norm_mode,
            "records_read": str(stats.records_read),
            "l3_raw_pairs": str(stats.raw_edge_count),
        }
    )
    return graph, stats


def build_graph(
    records,
    taxonomy: Taxonomy,
    seeds: list[SeedAssignment],
    config: IngestConfig = IngestConfig(),
    alias_map: venues.VenueAliasMap | None = None,
    warnings: list[str] | None = None,
) -> tuple[MultilayerGraph, IngestStats]:
    """Build the multilayer graph from an iterable of records.

    Pipeline order is dedup -> count -> threshold -> normalize, then seed L4
    edges are installed. Deterministic: identical inputs yield graphs that
    save to identical bytes.
    """
    state = _TallyState(config, alias_map if alias_map is not None else venues.VenueAliasMap())
    for record in records:
        state.consume(record)
    if state.stats.records_read == 0:
        message = "no records ingested; graph has no venue-venue edges"
        log.warning(message)
        if warnings is not None:
            warnings.append(message)
    return _assemble(state, taxonomy, seeds, config)


@dataclass
class IngestResult:
    graph: MultilayerGraph
    stats: IngestStats
    alias_map: venues.VenueAliasMap
    warnings: list[str]


def _tally_chunk(args) -> tuple:
    start_lineno, lines, config = args
    state = _TallyState(config, venues.VenueAliasMap())
    warnings: list[tuple[int, str]] = []
    for offset, line in enumerate(lines):
        lineno = start_lineno + offset
        line = line.strip()
        if not line:
            continue
        try:
            state.consume(record_from_json(json.loads(line)))
        except (json.JSONDecodeError, ValueError) as exc:
            warnings.append((lineno, f"line {lineno}: skipped malformed record ({exc})"))
    return (
        state.pair_counts,
        state.venue_keys,
        state.alias_map.entries,
        state.alias_map.counts,
        state.stats,
        warnings,
    )


def ingest_file(
    path: str | Path,
    taxonomy: Taxonomy,
    seeds: list[SeedAssignment],
    config: IngestConfig = IngestConfig(),
    workers: int = 1,
) -> IngestResult:
    """Build the graph from a JSONL record file, optionally in parallel.

    Tallies are merged by summation and the graph is assembled from sorted
    keys, so the result does not depend on ``workers``.
    """
    if workers <= 1:
        warnings: list[str] = []
        alias_map = venues.VenueAliasMap()
        graph, stats = build_graph(
            parse_records(path, warnings), taxonomy, seeds, config, alias_map, warnings
        )
        return IngestResult(graph, stats, alias_map, warnings)

    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    chunk_size = max(1, (len(lines) + workers - 1) // workers)
    chunks = [
        (start + 1, lines[start : start + chunk_size], config)
        for start in range(0, len(lines), chunk_size)
    ]
    state = _TallyState(config, venues.VenueAliasMap())
    tagged_warnings: list[tuple[int, str]] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for pair_counts, venue_keys, entries, counts, stats, chunk_warnings in pool.map(
            _tally_chunk, chunks
        ):
            state.pair_counts.update(pair_counts)
            state.venue_keys.update(venue_keys)
            state.alias_map.entries.update(entries)
            state.alias_map.counts.update(counts)
            state.stats.add(stats)
            tagged_warnings.extend(chunk_warnings)
    warnings = [message for _, message in sorted(tagged_warnings)]
    if state.stats.records_read == 0:
        warnings.append("no records ingested; graph has no venue-venue edges")
    graph, stats = _assemble(state, taxonomy, seeds, config)
    return IngestResult(graph, stats, state.alias_map, warnings)
