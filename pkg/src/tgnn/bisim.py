"""Graded template bisimulation at level l with counting bound c.

Two routes are provided on purpose. `bisimilar_via_twl` reduces the
question to color equality under the refinement algorithm. `bisim_oracle`
plays the back-and-forth game from the definition directly, matching
k-subsets of embeddings exhaustively; it shares no logic with the fast path
and serves as its independent witness at desk scale.
"""

from __future__ import annotations

from itertools import combinations

from .embeddings import enumerate_embeddings
from .errors import ResourceLimitError
from .graphs import LabelledGraph, PointedGraph
from .refinement import TwlConfig, run_twl
from .templates import Template

ORACLE_MAX_NODES = 8
ORACLE_MAX_EMBEDDINGS = 12
ORACLE_MAX_BOUND = 3


def bisimilar_via_twl(
    g: LabelledGraph,
    v: int,
    g2: LabelledGraph,
    v2: int,
    templates,
    level: int,
    bound: int | None = None,
) -> bool:
    """Level-l bisimilarity decided through color refinement."""
    cfg = TwlConfig(tuple(templates), level, bound)
    coloring = run_twl([g, g2], cfg)
    return coloring.color(level, 0, v) == coloring.color(level, 1, v2)


def _injective_match(subset, compat_row, n_other: int) -> bool:
    # exhaustive search for pairwise-distinct compatible partners
    used = [False] * n_other
    def place(idx: int) -> bool:
        if idx == len(subset):
            return True
        i = subset[idx]
        for j in range(n_other):
            if not used[j] and compat_row[i][j]:
                used[j] = True
                if place(idx + 1):
                    return True
                used[j] = False
        return False
    return place(0)


def _direction_holds(n_from: int, n_to: int, compat, k: int) -> bool:
    for subset in combinations(range(n_from), k):
        if not _injective_match(subset, compat, n_to):
            return False
    return True


def bisim_oracle(
    g: LabelledGraph,
    v: int,
    g2: LabelledGraph,
    v2: int,
    templates,
    level: int,
    bound: int | None = None,
) -> bool:
    """Direct back-and-forth check of graded template bisimilarity.

    Desk scale only: graph sizes <= 8, per-node embedding counts <= 12,
    bounds <= 3 (None means unbounded; k then ranges up to the larger
    embedding count, which suffices on finite graphs).
    """
    templates = tuple(templates)
    if g.num_nodes > ORACLE_MAX_NODES or g2.num_nodes > ORACLE_MAX_NODES:
        raise ResourceLimitError(f"oracle limited to {ORACLE_MAX_NODES}-node graphs")
    if bound is not None and bound > ORACLE_MAX_BOUND:
        raise ResourceLimitError(f"oracle limited to bounds <= {ORACLE_MAX_BOUND}")
    if not (0 <= v < g.num_nodes and 0 <= v2 < g2.num_nodes):
        raise ValueError("query nodes must belong to their graphs")

    emb_a = [[enumerate_embeddings(t, g, a) for a in g.nodes] for t in templates]
    emb_b = [[enumerate_embeddings(t, g2, b) for b in g2.nodes] for t in templates]
    for per_node in emb_a + emb_b:
        for embs in per_node:
            if len(embs) > ORACLE_MAX_EMBEDDINGS:
                raise ResourceLimitError(
                    f"oracle limited to {ORACLE_MAX_EMBEDDINGS} embeddings per node"
                )

    relation = {
        (a, b)
        for a in g.nodes
        for b in g2.nodes
        if g.labels[a] == g2.labels[b]
    }

    def pair_survives(a: int, b: int, prev: set[tuple[int, int]]) -> bool:
        for ti, t in enumerate(templates):
            ea = emb_a[ti][a]
            eb = emb_b[ti][b]
            compat = [
                [all((fa[u], fb[u]) in prev for u in range(t.size)) for fb in eb]
                for fa in ea
            ]
            compat_t = [[compat[i][j] for i in range(len(ea))] for j in range(len(eb))]
            k_max = bound if bound is not None else max(len(ea), len(eb))
            for k in range(1, k_max + 1):
                if not _direction_holds(len(ea), len(eb), compat, k):
                    return False
                if not _direction_holds(len(eb), len(ea), compat_t, k):
                    return False
        return True

    for _ in range(level):
        relation = {(a, b) for a, b in relation if pair_survives(a, b, relation)}
    return (v, v2) in relation


def bisim_classes(
    corpus: list[PointedGraph],
    templates,
    level: int,
    bound: int | None = None,
) -> list[list[int]]:
    """Partition corpus indices by refinement color of the point at `level`.

    One shared interning session covers the whole corpus. Classes are
    ordered by first member; that first member is the class representative.
    """
    if not corpus:
        raise ValueError("corpus must be non-empty")
    cfg = TwlConfig(tuple(templates), level, bound)
    coloring = run_twl([pg.graph for pg in corpus], cfg)
    classes: dict[int, list[int]] = {}
    for i, pg in enumerate(corpus):
        classes.setdefault(coloring.color(level, i, pg.point), []).append(i)
    return list(classes.values())
