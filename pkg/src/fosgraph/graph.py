"""Multilayer directed weighted graph over publications, venues, and field labels.

Nodes are identified by a dense integer id and carry a kind plus a canonical
text key. Edges live in typed layers; each layer constrains the kinds of its
endpoints. Layers:

    L0   publication -> field label
    L1   publication -> publication   (citation)
    L2   publication -> venue         (published in)
    L3   venue -> venue               (aggregated citation counts)
    L4   venue -> field label
    L5+  field label -> field label   (label-hierarchy layers)

The graph serializes to a versioned line-oriented text file that is
byte-deterministic for identical contents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import ConfigError, DataError

NodeId = int


class NodeKind(str, Enum):
    PUBLICATION = "publication"
    VENUE = "venue"
    FOS = "fos"


PUB_FOS = "L0"
PUB_PUB = "L1"
PUB_VENUE = "L2"
VENUE_VENUE = "L3"
VENUE_FOS = "L4"

_LAYER_RE = re.compile(r"^L(\d+)$")

_ENDPOINT_KINDS = {
    0: (NodeKind.PUBLICATION, NodeKind.FOS),
    1: (NodeKind.PUBLICATION, NodeKind.PUBLICATION),
    2: (NodeKind.PUBLICATION, NodeKind.VENUE),
    3: (NodeKind.VENUE, NodeKind.VENUE),
    4: (NodeKind.VENUE, NodeKind.FOS),
}


class UnknownNodeError(DataError):
    """Referenced node id is not part of the graph."""


class LayerConstraintError(DataError):
    """Edge endpoints do not match the kinds required by the layer."""


class GraphFormatError(DataError):
    """Graph file could not be parsed; message names the offending line."""


class GraphVersionError(GraphFormatError):
    """Graph file header declares an unsupported format version."""


def hierarchy_layer(k: int) -> str:
    """Tag of the k-th label-hierarchy layer.

    k=1 holds edges from level-2 labels to their level-1 parents, k=2 from
    level-3 labels to their level-2 parents, and so on.
    """
    if k < 1:
        raise ValueError(f"hierarchy layer index must be >= 1, got {k}")
    return f"L{4 + k}"


def layer_index(layer: str) -> int:
    m = _LAYER_RE.match(layer)
    if not m:
        raise ValueError(f"invalid layer tag {layer!r}")
    return int(m.group(1))


def layer_endpoint_kinds(layer: str) -> tuple[NodeKind, NodeKind]:
    idx = layer_index(layer)
    if idx in _ENDPOINT_KINDS:
        return _ENDPOINT_KINDS[idx]
    return (NodeKind.FOS, NodeKind.FOS)


def format_weight(w: float) -> str:
    """Canonical on-disk weight rendering (9 fractional digits)."""
    return f"{w:.9f}"


@dataclass
class NormalizationReport:
    """Outcome of an out-weight normalization pass.

    ``skipped_zero_weight`` lists nodes whose outgoing weights were all zero;
    those neighborhoods are left untouched rather than divided by zero.
    """

    nodes_normalized: int = 0
    skipped_zero_weight: list[NodeId] = field(default_factory=list)


class MultilayerGraph:
    """Node registry plus per-layer weighted adjacency.

    Build phase is single-writer; once built the structure is safe to share
    between any number of readers.
    """

    FORMAT_HEADER = "fos-graph v1"

    def __init__(self) -> None:
        self._nodes: list[tuple[NodeKind, str]] = []
        self._index: dict[tuple[NodeKind, str], NodeId] = {}
        # layer tag -> source id -> target id -> weight
        self._layers: dict[str, dict[NodeId, dict[NodeId, float]]] = {}
        self.metadata: dict[str, str] = {}

    # -- nodes ---------------------------------------------------------

    def add_node(self, kind: NodeKind, key: str) -> NodeId:
        """Return the id for (kind, key), allocating a fresh one if needed."""
        if not key:
            raise ValueError("node key must be non-empty")
        if "\t" in key or "\n" in key:
            raise ValueError(f"node key may not contain tabs or newlines: {key!r}")
        nid = self._index.get((kind, key))
        if nid is not None:
            return nid
        nid = len(self._nodes)
        self._nodes.append((kind, key))
        self._index[(kind, key)] = nid
        return nid

    def find_node(self, kind: NodeKind, key: str) -> NodeId | None:
        return self._index.get((kind, key))

    def node_kind(self, node: NodeId) -> NodeKind:
        self._check_node(node)
        return self._nodes[node][0]

    def node_key(self, node: NodeId) -> str:
        self._check_node(node)
        return self._nodes[node][1]

    def node_ids(self, kind: NodeKind | None = None) -> list[NodeId]:
        if kind is None:
            return list(range(len(self._nodes)))
        return [i for i, (k, _) in enumerate(self._nodes) if k is kind]

    def node_count(self, kind: NodeKind | None = None) -> int:
        if kind is None:
            return len(self._nodes)
        return sum(1 for k, _ in self._nodes if k is kind)

    def _check_node(self, node: NodeId) -> None:
        if not 0 <= node < len(self._nodes):
            raise UnknownNodeError(f"unknown node id {node}")

    # -- edges ---------------------------------------------------------

    def upsert_edge(self, source: NodeId, target: NodeId, layer: str, delta: float) -> float:
        """Add ``delta`` to the (source, target, layer) edge weight.

        The edge is created at weight ``delta`` if absent. Returns the new
        accumulated weight.
        """
        self._check_node(source)
        self._check_node(target)
        if delta < 0:
            raise ValueError(f"edge weight delta must be >= 0, got {delta}")
        want_src, want_dst = layer_endpoint_kinds(layer)
        if self._nodes[source][0] is not want_src or self._nodes[target][0] is not want_dst:
            raise LayerConstraintError(
                f"layer {layer} connects {want_src.value}->{want_dst.value}, got "
                f"{self._nodes[source][0].value}->{self._nodes[target][0].value}"
            )
        adj = self._layers.setdefault(layer, {}).setdefault(source, {})
        w = adj.get(target, 0.0) + delta
        adj[target] = w
        return w

    def edge_weight(self, source: NodeId, target: NodeId, layer: str) -> float | None:
        return self._layers.get(layer, {}).get(source, {}).get(target)

    def out_degree(self, node: NodeId, layer: str) -> int:
        self._check_node(node)
        return len(self._layers.get(layer, {}).get(node, {}))

    def neighbors(self, node: NodeId, layer: str) -> list[tuple[NodeId, float]]:
        """Outgoing (target, weight) pairs, heaviest first, ties by target key."""
        self._check_node(node)
        adj = self._layers.get(layer, {}).get(node, {})
        return sorted(adj.items(), key=lambda kv: (-kv[1], self._nodes[kv[0]][1]))

    def edges(self, layer: str | None = None) -> list[tuple[NodeId, NodeId, str, float]]:
        """All edges as (source, target, layer, weight), in canonical order."""
        tags = [layer] if layer is not None else sorted(self._layers, key=layer_index)
        out = []
        for tag in tags:
            for src in sorted(self._layers.get(tag, {})):
                adj = self._layers[tag][src]
                for dst in sorted(adj):
                    out.append((src, dst, tag, adj[dst]))
        return out

    def edge_count(self, layer: str | None = None) -> int:
        if layer is not None:
            return sum(len(a) for a in self._layers.get(layer, {}).values())
        return sum(len(a) for adj in self._layers.values() for a in adj.values())

    def layers(self) -> list[str]:
        return sorted((t for t in self._layers if self._layers[t]), key=layer_index)

    def clear_layer(self, layer: str) -> None:
        self._layers.pop(layer, None)
        self.metadata.pop(f"normalized_{layer}", None)

    # -- bulk transforms -------------------------------------------------

    def normalize_outgoing(self, layer: str, mode: str = "sum") -> NormalizationReport:
        """Rescale each node's outgoing weights in ``layer``.

        Mode "sum" divides by the neighborhood total (weights become a
        probability distribution); mode "max" divides by the neighborhood
        maximum. Nodes with no outgoing edges are untouched; nodes whose
        weights are all zero are skipped and reported.
        """
        if mode not in ("sum", "max"):
            raise ConfigError(f"unknown normalization mode {mode!r}")
        report = NormalizationReport()
        for src in sorted(self._layers.get(layer, {})):
            adj = self._layers[layer][src]
            if not adj:
                continue
            denom = sum(adj.values()) if mode == "sum" else max(adj.values())
            if denom <= 0.0:
                report.skipped_zero_weight.append(src)
                continue
            for dst in adj:
                adj[dst] /= denom
            report.nodes_normalized += 1
        self.metadata[f"normalized_{layer}"] = mode
        return report

    def normalized_mode(self, layer: str) -> str | None:
        """Mode of the last normalization applied to ``layer``, if any."""
        return self.metadata.get(f"normalized_{layer}")

    def prune_layer(self, layer: str, min_weight: float) -> int:
        """Drop edges with weight <= min_weight; strictly heavier edges survive."""
        removed = 0
        adjacency = self._layers.get(layer, {})
        for src in sorted(adjacency):
            adj = adjacency[src]
            doomed = [dst for dst, w in adj.items() if w <= min_weight]
            for dst in doomed:
                del adj[dst]
            removed += len(doomed)
        for src in [s for s, a in adjacency.items() if not a]:
            del adjacency[src]
        return removed

    # -- serialization ---------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write the graph as versioned text; byte-identical for equal graphs."""
        lines = [self.FORMAT_HEADER]
        for k in sorted(self.metadata):
            v = self.metadata[k]
            if any(c in f"{k}{v}" for c in "\t\n"):
                raise ValueError(f"metadata entry {k!r} contains tab or newline")
            lines.append(f"M\t{k}\t{v}")
        for nid, (kind, key) in enumerate(self._nodes):
            lines.append(f"N\t{nid}\t{kind.value}\t{key}")
        for src, dst, tag, w in self.edges():
            lines.append(f"E\t{src}\t{dst}\t{tag}\t{format_weight(w)}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "MultilayerGraph":
        graph = cls()
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            if header != cls.FORMAT_HEADER:
                if header.startswith("fos-graph"):
                    raise GraphVersionError(
                        f"line 1: unsupported graph format version {header!r}, "
                        f"expected {cls.FORMAT_HEADER!r}"
                    )
                raise GraphFormatError(f"line 1: not a graph file (header {header!r})")
            for lineno, raw in enumerate(fh, start=2):
                line = raw.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                try:
                    graph._load_line(parts)
                except GraphFormatError:
                    raise
                except (ValueError, KeyError, IndexError, DataError) as exc:
                    raise GraphFormatError(f"line {lineno}: {exc}") from exc
        return graph

    def _load_line(self, parts: list[str]) -> None:
        tag = parts[0]
        if tag == "M":
            if len(parts) != 3:
                raise ValueError("metadata line needs 3 fields")
            self.metadata[parts[1]] = parts[2]
        elif tag == "N":
            if len(parts) != 4:
                raise ValueError("node line needs 4 fields")
            nid, kind, key = int(parts[1]), NodeKind(parts[2]), parts[3]
            if nid != len(self._nodes):
                raise ValueError(f"node ids must be dense and ascending, got {nid}")
            self.add_node(kind, key)
        elif tag == "E":
            if len(parts) != 5:
                raise ValueError("edge line needs 5 fields")
            src, dst, layer, w = int(parts[1]), int(parts[2]), parts[3], float(parts[4])
            if w < 0:
                raise ValueError(f"negative edge weight {w}")
            self.upsert_edge(src, dst, layer, w)
        else:
            raise ValueError(f"unknown record tag {tag!r}")

    # -- equality --------------------------------------------------------

    def _canonical_edges(self) -> list[tuple[str, NodeId, NodeId, str]]:
        return [(tag, s, d, format_weight(w)) for s, d, tag, w in self.edges()]

    def __eq__(self, other: object) -> bool:
        """Structural equality; weights compared at on-disk (9-digit) resolution."""
        if not isinstance(other, MultilayerGraph):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self.metadata == other.metadata
            and self._canonical_edges() == other._canonical_edges()
        )

    def __repr__(self) -> str:
        return (
            f"MultilayerGraph(nodes={len(self._nodes)}, "
            f"edges={self.edge_count()}, layers={self.layers()})"
        )
