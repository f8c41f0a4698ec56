"""Independent reference implementations used to cross-validate the package.

Everything here recomputes results from first principles (exhaustive maps,
textbook refinement, direct semantics) and deliberately avoids the code
paths under test.
"""

from __future__ import annotations

import random
from itertools import permutations

import numpy as np

from tgnn import (
    AcGnn,
    AcLayer,
    AffineAgg,
    AndGateAgg,
    Diamond,
    GnnModel,
    LabelledGraph,
    Layer,
    Not,
    OuterAgg,
    And,
    ProjectAgg,
    Prop,
    Slot,
    Template,
)


def brute_force_embeddings(t: Template, g: LabelledGraph, v: int) -> list[tuple[int, ...]]:
    """Filter every injective vertex map with the root pinned to v."""
    found = []
    others = [u for u in g.nodes if u != v]
    for perm in permutations(others, t.size - 1):
        assign = (v,) + perm
        ok = True
        for u, w in t.pos_edges:
            if (assign[u], assign[w]) not in g.edges:
                ok = False
                break
        if ok:
            for u, w in t.neg_edges:
                if (assign[u], assign[w]) in g.edges:
                    ok = False
                    break
        if ok:
            found.append(assign)
    return found


def textbook_one_wl(graphs: list[LabelledGraph], rounds: int):
    """Standard color refinement over out-neighbours; returns the partition
    of (graph, node) pairs at each round 0..rounds."""
    colors = {}
    table: dict = {}

    def intern(sig):
        if sig not in table:
            table[sig] = len(table)
        return table[sig]

    for gi, g in enumerate(graphs):
        for v in g.nodes:
            colors[(gi, v)] = intern(("init", g.labels[v]))
    partitions = [_partition(colors)]
    for _ in range(rounds):
        new = {}
        for gi, g in enumerate(graphs):
            for v in g.nodes:
                nbrs = sorted(colors[(gi, u)] for u in g.out_neighbors[v])
                new[(gi, v)] = intern((colors[(gi, v)], tuple(nbrs)))
        colors = new
        partitions.append(_partition(colors))
    return partitions


def _partition(colors: dict):
    groups: dict = {}
    for key, col in colors.items():
        groups.setdefault(col, []).append(key)
    return frozenset(frozenset(members) for members in groups.values())


def brute_force_eval(phi, g: LabelledGraph, v: int) -> bool:
    """Direct semantics without memoization or the package's enumerator."""
    if isinstance(phi, Prop):
        return g.labels[v][phi.index] == 1.0
    if isinstance(phi, Not):
        return not brute_force_eval(phi.operand, g, v)
    if isinstance(phi, And):
        return brute_force_eval(phi.left, g, v) and brute_force_eval(phi.right, g, v)
    if isinstance(phi, Diamond):
        count = 0
        for f in brute_force_embeddings(phi.template, g, v):
            if all(
                brute_force_eval(arg, g, f[i + 1]) for i, arg in enumerate(phi.args)
            ):
                count += 1
        return count >= phi.threshold
    raise TypeError(phi)


def _reference_agg(agg: OuterAgg, rows: list[np.ndarray], width: int) -> np.ndarray:
    if not rows:
        return np.zeros(width)
    if agg.kind == "max":
        acc = rows[0].copy()
        for row in rows[1:]:
            acc = np.maximum(acc, row)
        return acc
    if agg.kind == "bounded_sum":
        counts: dict = {}
        for row in rows:
            counts[tuple(row.tolist())] = counts.get(tuple(row.tolist()), 0) + 1
        acc = np.zeros(width)
        for value in sorted(counts, key=repr):
            acc = acc + np.array(value) * min(counts[value], agg.bound)
        return acc
    acc = np.zeros(width)
    for row in rows:
        acc = acc + row
    if agg.kind == "mean":
        acc = acc / len(rows)
    return acc


_ACT = {
    "identity": lambda x: x,
    "relu": lambda x: np.maximum(x, 0.0),
    "truncated_relu": lambda x: np.minimum(np.maximum(x, 0.0), 1.0),
}


def reference_ac_forward(ac: AcGnn, g: LabelledGraph):
    """Directly coded aggregate-combine forward pass over out-neighbours."""
    x = np.array([list(row) for row in g.labels], dtype=float)
    feats = [x]
    for layer in ac.layers:
        prev = feats[-1]
        z = np.zeros_like(prev)
        for v in g.nodes:
            rows = [prev[u] for u in g.out_neighbors[v]]
            z[v] = _reference_agg(layer.agg, rows, prev.shape[1])
        C = np.array([list(r) for r in layer.C], dtype=float)
        W = np.array([list(r) for r in layer.W], dtype=float)
        b = np.array(list(layer.b), dtype=float)
        feats.append(_ACT[layer.activation](prev @ C + z @ W + b))
    cls = [
        int(feats[-1][v, ac.cls_component] >= ac.cls_threshold) for v in g.nodes
    ]
    return feats, cls


def reference_ac_plus_forward(layers, dimension, cls_component, cls_threshold, g):
    """Directly coded forward pass with neighbour and non-neighbour blocks."""
    x = np.array([list(row) for row in g.labels], dtype=float)
    feats = [x]
    for layer in layers:
        prev = feats[-1]
        nbr = np.zeros_like(prev)
        non = np.zeros_like(prev)
        for v in g.nodes:
            nbr_rows = [prev[u] for u in g.out_neighbors[v]]
            non_rows = [
                prev[u] for u in g.nodes if u != v and (v, u) not in g.edges
            ]
            nbr[v] = _reference_agg(layer.agg_nbr, nbr_rows, prev.shape[1])
            non[v] = _reference_agg(layer.agg_non, non_rows, prev.shape[1])
        C = np.array([list(r) for r in layer.C], dtype=float)
        W1 = np.array([list(r) for r in layer.W_nbr], dtype=float)
        W2 = np.array([list(r) for r in layer.W_non], dtype=float)
        b = np.array(list(layer.b), dtype=float)
        feats.append(_ACT[layer.activation](prev @ C + nbr @ W1 + non @ W2 + b))
    cls = [int(feats[-1][v, cls_component] >= cls_threshold) for v in g.nodes]
    return feats, cls


def bijection_bisimilar(g, v, g2, v2, templates, level) -> bool:
    """Unbounded bisimilarity via the bijection formulation: per template a
    pointwise-related perfect matching between the two embedding sets."""
    emb_a = {
        (ti, a): brute_force_embeddings(t, g, a)
        for ti, t in enumerate(templates)
        for a in g.nodes
    }
    emb_b = {
        (ti, b): brute_force_embeddings(t, g2, b)
        for ti, t in enumerate(templates)
        for b in g2.nodes
    }
    relation = {
        (a, b) for a in g.nodes for b in g2.nodes if g.labels[a] == g2.labels[b]
    }

    def has_bijection(ea, eb, size, prev) -> bool:
        if len(ea) != len(eb):
            return False
        used = [False] * len(eb)

        def place(i):
            if i == len(ea):
                return True
            for j in range(len(eb)):
                if used[j]:
                    continue
                if all((ea[i][u], eb[j][u]) in prev for u in range(size)):
                    used[j] = True
                    if place(i + 1):
                        return True
                    used[j] = False
            return False

        return place(0)

    for _ in range(level):
        relation = {
            (a, b)
            for a, b in relation
            if all(
                has_bijection(emb_a[(ti, a)], emb_b[(ti, b)], t.size, relation)
                for ti, t in enumerate(templates)
            )
        }
    return (v, v2) in relation


def dyadic(rng: random.Random, span: int = 32, denom: int = 16) -> float:
    """Random dyadic rational; sums and products of these stay exact in
    float64 at the sizes used in tests."""
    return rng.randint(-span, span) / denom


def dyadic_matrix(rng: random.Random, rows: int, cols: int):
    return tuple(tuple(dyadic(rng) for _ in range(cols)) for _ in range(rows))


def random_ac_gnn(rng: random.Random, dimension: int, layers: int) -> AcGnn:
    return AcGnn(
        dimension=dimension,
        layers=tuple(
            AcLayer(
                C=dyadic_matrix(rng, dimension, dimension),
                W=dyadic_matrix(rng, dimension, dimension),
                b=tuple(dyadic(rng) for _ in range(dimension)),
                activation=rng.choice(["relu", "truncated_relu", "identity"]),
                agg=OuterAgg("sum"),
            )
            for _ in range(layers)
        ),
        cls_component=rng.randrange(dimension),
        cls_threshold=0.5,
    )


def random_model(
    rng: random.Random,
    templates: list[Template],
    dimension: int,
    num_layers: int,
    bound: int | None,
) -> GnnModel:
    """Random template model; bounded_sum(bound) everywhere when bound is
    given, otherwise a mix of sum/mean/max outer aggregators."""
    layers = []
    for _ in range(num_layers):
        slots = []
        for t in rng.sample(templates, rng.randint(1, min(2, len(templates)))):
            pick = rng.random()
            if pick < 0.4:
                feature = rng.randrange(dimension) if rng.random() < 0.5 else None
                agg = ProjectAgg(rng.randrange(t.size), feature)
            elif pick < 0.7 and t.arity >= 1:
                agg = AndGateAgg(
                    tuple(rng.randrange(dimension) for _ in range(t.arity))
                )
            else:
                out_dim = rng.randint(1, 2)
                agg = AffineAgg(
                    dyadic_matrix(rng, t.size * dimension, out_dim),
                    tuple(dyadic(rng) for _ in range(out_dim)),
                    rng.choice(["identity", "relu", "truncated_relu"]),
                )
            outer = (
                OuterAgg("bounded_sum", bound)
                if bound is not None
                else OuterAgg(rng.choice(["sum", "mean", "max"]))
            )
            slots.append(Slot(t, agg, outer))
        z_dim = sum(s.output_dim(dimension) for s in slots)
        layers.append(
            Layer(
                slots=tuple(slots),
                C=dyadic_matrix(rng, dimension, dimension),
                A=dyadic_matrix(rng, z_dim, dimension),
                b=tuple(dyadic(rng) for _ in range(dimension)),
                activation=rng.choice(["relu", "truncated_relu", "identity"]),
            )
        )
    return GnnModel(
        dimension=dimension,
        layers=tuple(layers),
        cls_component=rng.randrange(dimension),
        cls_threshold=0.5,
    )
