"""Publication classification from venue metadata.

Three strategies back-propagate venue->label weights onto a publication:

* ``pub``    - each of the n distinct venues the publication appeared in
               contributes 1/n of its label distribution.
* ``ref``    - each venue v among the publication's references contributes in
               proportion to the number of reference entries landing in v.
* ``citref`` - like ``ref`` with citing venues pooled into the entry list.

Incoming venue names pass through the same canonicalization as graph
construction; names that do not resolve to a graph venue are dropped from
both numerator and denominator and surface in the resolution report.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from . import venues
from .errors import ConfigError
from .graph import MultilayerGraph, NodeKind
from .propagate import FosWeightTable
from .taxonomy import Taxonomy

STRATEGIES = ("pub", "ref", "citref")

STATUS_OK = "ok"
STATUS_UNCLASSIFIABLE = "unclassifiable"


@dataclass
class ClassificationRequest:
    publication_id: str
    strategy: str = "ref"
    published_venues: list[str] = field(default_factory=list)
    reference_venues: list[str] = field(default_factory=list)  # with multiplicity
    citation_venues: list[str] = field(default_factory=list)
    level: int = 3
    top_t: int | None = None
    min_score: float | None = None


@dataclass
class FosScore:
    fos_id: str
    score: float
    contributions: list[tuple[str, float]] = field(default_factory=list)
    ancestors: list[str] = field(default_factory=list)


@dataclass
class ClassificationResult:
    publication_id: str
    strategy: str
    level: int
    labels: list[FosScore]
    matched_venues: int = 0
    unmatched_venues: int = 0
    status: str = STATUS_OK


def select(ranked: list[FosScore], top_t: int | None, min_score: float | None) -> list[FosScore]:
    """Truncate a ranked score list: fixed top-T, or strictly above a floor.

    Exactly one mode may be active; with neither given, top-1 applies.
    """
    if top_t is not None and min_score is not None:
        raise ConfigError("choose either top_t or min_score, not both")
    if min_score is not None:
        return [s for s in ranked if s.score > min_score]
    t = 1 if top_t is None else top_t
    if t < 1:
        raise ConfigError(f"top_t must be >= 1, got {t}")
    return ranked[:t]


class Classifier:
    """Classification over a built graph and propagated table.

    Graph and table are read-only; the alias map memoizes canonical keys for
    incoming venue names, so concurrent callers should use separate
    Classifier instances (or pre-populated maps).
    """

    def __init__(
        self,
        graph: MultilayerGraph,
        table: FosWeightTable,
        taxonomy: Taxonomy,
        alias_map: venues.VenueAliasMap | None = None,
        norm_config: venues.VenueNormConfig = venues.DEFAULT_CONFIG,
    ):
        self.graph = graph
        self.table = table
        self.taxonomy = taxonomy
        self.alias_map = alias_map if alias_map is not None else venues.VenueAliasMap()
        self.norm_config = norm_config

    def _resolve(self, raw: str) -> str | None:
        """Canonical key if the name resolves to a venue present in the graph."""
        try:
            key = venues.canonicalize(raw, self.alias_map, self.norm_config)
        except venues.UnresolvableVenueError:
            return None
        if self.graph.find_node(NodeKind.VENUE, key) is None:
            return None
        return key

    def _resolve_all(self, raw_names: list[str]) -> tuple[list[str], int, int]:
        keys = []
        unmatched = 0
        for raw in raw_names:
            key = self._resolve(raw)
            if key is None:
                unmatched += 1
            else:
                keys.append(key)
        return keys, len(keys), unmatched

    def _score(self, request: ClassificationRequest, venue_weights: dict[str, float],
               matched: int, unmatched: int) -> ClassificationResult:
        acc: dict[str, float] = {}
        contrib: dict[str, list[tuple[str, float]]] = {}
        for venue_key in sorted(venue_weights):
            w_pv = venue_weights[venue_key]
            for fos_id, fos_w in self.table.get(venue_key, request.level):
                part = w_pv * fos_w
                acc[fos_id] = acc.get(fos_id, 0.0) + part
                contrib.setdefault(fos_id, []).append((venue_key, part))
        ranked = [
            FosScore(fos_id, score, contrib[fos_id], self.taxonomy.ancestors(fos_id))
            for fos_id, score in sorted(acc.items(), key=lambda kv: (-kv[1], kv[0]))
        ]
        labels = select(ranked, request.top_t, request.min_score)
        status = STATUS_OK if ranked else STATUS_UNCLASSIFIABLE
        return ClassificationResult(
            publication_id=request.publication_id,
            strategy=request.strategy,
            level=request.level,
            labels=labels,
            matched_venues=matched,
            unmatched_venues=unmatched,
            status=status,
        )

    def classify_pub(self, request: ClassificationRequest) -> ClassificationResult:
        """Published-by: weight 1/n to each of the n distinct resolved venues."""
        keys, matched, unmatched = self._resolve_all(request.published_venues)
        distinct = sorted(set(keys))
        if not distinct:
            return self._unclassifiable(request, matched, unmatched)
        share = 1.0 / len(distinct)
        return self._score(request, {k: share for k in distinct}, matched, unmatched)

    def classify_ref(self, request: ClassificationRequest) -> ClassificationResult:
        """References: venue weight = (reference entries in venue) / (total entries)."""
        return self._classify_entries(request, request.reference_venues)

    def classify_citref(self, request: ClassificationRequest) -> ClassificationResult:
        """References + citations: citing venue entries pooled into the count."""
        return self._classify_entries(
            request, request.reference_venues + request.citation_venues
        )

    def _classify_entries(self, request: ClassificationRequest, raw_names: list[str]):
        keys, matched, unmatched = self._resolve_all(raw_names)
        if not keys:
            return self._unclassifiable(request, matched, unmatched)
        counts = Counter(keys)
        n = len(keys)
        return self._score(
            request, {k: c / n for k, c in counts.items()}, matched, unmatched
        )

    def _unclassifiable(self, request, matched, unmatched) -> ClassificationResult:
        return ClassificationResult(
            publication_id=request.publication_id,
            strategy=request.strategy,
            level=request.level,
            labels=[],
            matched_venues=matched,
            unmatched_venues=unmatched,
            status=STATUS_UNCLASSIFIABLE,
        )

    def classify(self, request: ClassificationRequest) -> ClassificationResult:
        if request.strategy == "pub":
            return self.classify_pub(request)
        if request.strategy == "ref":
            return self.classify_ref(request)
        if request.strategy == "citref":
            return self.classify_citref(request)
        raise ConfigError(f"unknown strategy {request.strategy!r}")


def result_to_json(result: ClassificationResult) -> str:
    """One-line JSON for batch output; key order fixed for determinism."""
    obj = {
        "id": result.publication_id,
        "strategy": result.strategy,
        "level": result.level,
        "status": result.status,
        "labels": [
            {"fos": s.fos_id, "score": s.score, "ancestors": s.ancestors}
            for s in result.labels
        ],
        "unmatched_venues": result.unmatched_venues,
    }
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def result_from_json(line: str) -> ClassificationResult:
    obj = json.loads(line)
    labels = [
        FosScore(entry["fos"], float(entry["score"]), [], list(entry.get("ancestors", [])))
        for entry in obj.get("labels", [])
    ]
    return ClassificationResult(
        publication_id=obj["id"],
        strategy=obj.get("strategy", ""),
        level=int(obj.get("level", 3)),
        labels=labels,
        unmatched_venues=int(obj.get("unmatched_venues", 0)),
        status=obj.get("status", STATUS_OK),
    )
