"""Seeded generators for graphs and formulae used in experiments and
cross-validation runs."""

from __future__ import annotations

import random

from .graphs import LabelledGraph
from .logic import And, Diamond, Formula, Not, Prop
from .templates import Template


def cycle_graph(n: int, dim: int = 1) -> LabelledGraph:
    """Directed n-cycle 0 -> 1 -> ... -> n-1 -> 0 with all-zero labels."""
    if n < 1:
        raise ValueError("cycle needs at least one node")
    edges = frozenset((i, (i + 1) % n) for i in range(n))
    return LabelledGraph(n, edges, tuple((0.0,) * dim for _ in range(n)))


def star_graph(leaves: int, dim: int = 1) -> LabelledGraph:
    """Centre node 0 with edges to `leaves` leaf nodes, all-zero labels."""
    if leaves < 0:
        raise ValueError("leaf count must be >= 0")
    edges = frozenset((0, i) for i in range(1, leaves + 1))
    return LabelledGraph(leaves + 1, edges, tuple((0.0,) * dim for _ in range(leaves + 1)))


def random_graph(
    rng: random.Random, num_nodes: int, dim: int = 1, edge_prob: float = 0.3
) -> LabelledGraph:
    """Directed Erdos-Renyi graph without self-loops; labels are independent
    fair coin flips per proposition."""
    edges = frozenset(
        (u, v)
        for u in range(num_nodes)
        for v in range(num_nodes)
        if u != v and rng.random() < edge_prob
    )
    labels = tuple(
        tuple(float(rng.random() < 0.5) for _ in range(dim)) for _ in range(num_nodes)
    )
    return LabelledGraph(num_nodes, edges, labels)


def permuted_copy(
    rng: random.Random, g: LabelledGraph
) -> tuple[LabelledGraph, list[int]]:
    """Isomorphic copy under a random node relabelling; returns the map
    old node -> new node."""
    perm = list(range(g.num_nodes))
    rng.shuffle(perm)
    edges = frozenset((perm[u], perm[v]) for u, v in g.edges)
    labels: list[tuple[float, ...]] = [()] * g.num_nodes
    for v in g.nodes:
        labels[perm[v]] = g.labels[v]
    return LabelledGraph(g.num_nodes, edges, tuple(labels)), perm


def random_formula(
    rng: random.Random,
    templates: list[Template],
    ap: list[str],
    max_md: int = 2,
    max_sd: int = 3,
    max_cb: int = 2,
) -> Formula:
    """Random formula within the given modal-depth, syntactic-depth, and
    counting-bound budgets."""
    if not ap:
        raise ValueError("at least one proposition is required")

    def build(md: int, sd: int) -> Formula:
        choices = ["prop"]
        if sd >= 1:
            choices += ["not", "and"]
            if md >= 1 and max_cb >= 1 and templates:
                choices += ["diamond", "diamond"]
        kind = rng.choice(choices)
        if kind == "prop":
            return Prop(rng.randrange(len(ap)))
        if kind == "not":
            return Not(build(md, sd - 1))
        if kind == "and":
            return And(build(md, sd - 1), build(md, sd - 1))
        t = rng.choice(templates)
        threshold = rng.randint(1, max_cb)
        args = tuple(build(md - 1, sd - 1) for _ in range(t.arity))
        return Diamond(t, threshold, args)

    return build(max_md, max_sd)
