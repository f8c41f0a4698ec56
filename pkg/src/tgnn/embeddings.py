"""Enumeration and counting of injective template embeddings.

An embedding of a template into a pointed graph is an injective map of
template vertices to graph nodes that pins the root to the point, realizes
every positive edge as a graph edge, and realizes every negative edge as a
non-edge. Embeddings are represented as plain assignment tuples indexed by
template vertex.
"""

from __future__ import annotations

from .graphs import LabelledGraph
from .templates import Template

Assignment = tuple[int, ...]


def _constraint_schedule(t: Template) -> list[list[tuple[int, int, bool]]]:
    # checks[i]: constraints decidable once vertex i is assigned
    checks: list[list[tuple[int, int, bool]]] = [[] for _ in range(t.size)]
    for u, v in sorted(t.pos_edges):
        checks[max(u, v)].append((u, v, True))
    for u, v in sorted(t.neg_edges):
        checks[max(u, v)].append((u, v, False))
    return checks


def _search(t: Template, g: LabelledGraph, v: int, collect: list | None) -> int:
    if not (0 <= v < g.num_nodes):
        raise ValueError(f"node {v} is not in the graph")
    if t.size > g.num_nodes:
        return 0
    checks = _constraint_schedule(t)
    edges = g.edges
    assign = [0] * t.size
    used = [False] * g.num_nodes
    count = 0

    def satisfied(i: int) -> bool:
        for u, w, want in checks[i]:
            if ((assign[u], assign[w]) in edges) != want:
                return False
        return True

    def extend(i: int) -> None:
        nonlocal count
        if i == t.size:
            count += 1
            if collect is not None:
                collect.append(tuple(assign))
            return
        for cand in range(g.num_nodes):
            if used[cand]:
                continue
            assign[i] = cand
            if satisfied(i):
                used[cand] = True
                extend(i + 1)
                used[cand] = False

    assign[0] = v
    if satisfied(0):
        used[v] = True
        extend(1)
    return count


def enumerate_embeddings(t: Template, g: LabelledGraph, v: int) -> list[Assignment]:
    """All embeddings of `t` into (g, v), in lexicographic assignment order."""
    out: list[Assignment] = []
    _search(t, g, v, out)
    return out


def count_embeddings(t: Template, g: LabelledGraph, v: int) -> int:
    """len(enumerate_embeddings(...)) without materializing the assignments."""
    return _search(t, g, v, None)
