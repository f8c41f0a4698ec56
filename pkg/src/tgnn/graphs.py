"""Labelled directed graphs with per-node feature vectors, plus JSON file i/o.

The on-disk format uses arbitrary string node ids; they are mapped to dense
integers 0..n-1 in file order on load. In-memory graphs always use dense ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import GraphFormatError


@dataclass(frozen=True)
class LabelledGraph:
    """Finite directed graph over dense node ids 0..num_nodes-1.

    `labels[v]` is the real-valued feature vector of node v; all vectors
    share one dimension. Edges form a set of ordered pairs (no parallel
    edges); self-loops are permitted.
    """

    num_nodes: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        labels = tuple(tuple(float(x) for x in row) for row in self.labels)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "labels", labels)
        if self.num_nodes < 0:
            raise ValueError("num_nodes must be non-negative")
        if len(labels) != self.num_nodes:
            raise ValueError(
                f"expected {self.num_nodes} label vectors, got {len(labels)}"
            )
        dims = {len(row) for row in labels}
        if len(dims) > 1:
            raise ValueError(f"label vectors have mixed dimensions {sorted(dims)}")
        for u, v in edges:
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise ValueError(
                    f"edge ({u}, {v}) has an endpoint outside 0..{self.num_nodes - 1}"
                )

    @property
    def dimension(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    @property
    def nodes(self) -> range:
        return range(self.num_nodes)

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for u, v in sorted(self.edges):
            out[u].append(v)
        return tuple(tuple(vs) for vs in out)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def out_degree(self, v: int) -> int:
        return len(self.out_neighbors[v])


@dataclass(frozen=True)
class PointedGraph:
    """A graph together with a distinguished node."""

    graph: LabelledGraph
    point: int

    def __post_init__(self):
        if not (0 <= self.point < self.graph.num_nodes):
            raise ValueError(f"point {self.point} is not a node of the graph")


def graph_from_json(obj: object) -> tuple[LabelledGraph, list[str]]:
    """Parse the graph file format; returns the graph and its node ids."""
    if not isinstance(obj, dict):
        raise GraphFormatError("graph file must be a JSON object")
    nodes = obj.get("nodes")
    edges = obj.get("edges")
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise GraphFormatError('graph file needs "nodes" and "edges" arrays')

    ids: list[str] = []
    index: dict[str, int] = {}
    labels: list[tuple[float, ...]] = []
    for entry in nodes:
        if not isinstance(entry, dict) or "id" not in entry or "label" not in entry:
            raise GraphFormatError(f'node entries need "id" and "label": {entry!r}')
        node_id = entry["id"]
        if not isinstance(node_id, str):
            raise GraphFormatError(f"node id must be a string, got {node_id!r}")
        if node_id in index:
            raise GraphFormatError(f"duplicate node id {node_id!r}")
        label = entry["label"]
        if not isinstance(label, list) or any(
            isinstance(x, bool) or not isinstance(x, (int, float)) for x in label
        ):
            raise GraphFormatError(f"label of node {node_id!r} must be a number array")
        index[node_id] = len(ids)
        ids.append(node_id)
        labels.append(tuple(float(x) for x in label))

    if len({len(row) for row in labels}) > 1:
        raise GraphFormatError("label vectors have mixed dimensions")

    edge_set: set[tuple[int, int]] = set()
    for entry in edges:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise GraphFormatError(f"edge entries must be [source, target]: {entry!r}")
        src, dst = entry
        if src not in index or dst not in index:
            raise GraphFormatError(f"edge {entry!r} references an unknown node id")
        pair = (index[src], index[dst])
        if pair in edge_set:
            raise GraphFormatError(f"duplicate edge {entry!r}")
        edge_set.add(pair)

    return LabelledGraph(len(ids), frozenset(edge_set), tuple(labels)), ids


def graph_to_json(g: LabelledGraph, ids: list[str] | None = None) -> dict:
    if ids is None:
        ids = [str(v) for v in g.nodes]
    if len(ids) != g.num_nodes:
        raise ValueError("id list length does not match node count")
    return {
        "nodes": [{"id": ids[v], "label": list(g.labels[v])} for v in g.nodes],
        "edges": [[ids[u], ids[v]] for u, v in sorted(g.edges)],
    }


def dumps_graph(g: LabelledGraph, ids: list[str] | None = None) -> str:
    """Canonical text form; identical graphs produce identical bytes."""
    return json.dumps(graph_to_json(g, ids), indent=2) + "\n"


def load_graph(path: str | Path) -> tuple[LabelledGraph, list[str]]:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return graph_from_json(obj)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def save_graph(g: LabelledGraph, path: str | Path, ids: list[str] | None = None) -> None:
    Path(path).write_text(dumps_graph(g, ids))
