import random
from itertools import product

import pytest

from tgnn import (
    LabelledGraph,
    PointedGraph,
    ResourceLimitError,
    bisim_classes,
    bisim_oracle,
    bisimilar_via_twl,
    cycle_graph,
    permuted_copy,
    random_graph,
)

from helpers import bijection_bisimilar


def test_isomorphic_pointed_graphs_are_bisimilar(registry, c6):
    rng = random.Random(3)
    copy, perm = permuted_copy(rng, c6)
    templates = registry.templates()
    for level in (0, 1, 3):
        for bound in (None, 1, 2):
            assert bisimilar_via_twl(c6, 1, copy, perm[1], templates, level, bound)


def test_cycles_not_bisimilar_with_triangle_and_path(ttri, tp, c3, c6):
    assert not bisimilar_via_twl(c3, 0, c6, 0, [ttri, tp], 1)


def test_label_mismatch_fails_at_level_zero(registry):
    g1 = LabelledGraph(1, set(), [(1.0,)])
    g2 = LabelledGraph(1, set(), [(0.0,)])
    assert not bisimilar_via_twl(g1, 0, g2, 0, registry.templates(), 0)


def test_oracle_vacuous_on_isolated_nodes(t1, ttri):
    g1 = LabelledGraph(1, set(), [(1.0,)])
    g2 = LabelledGraph(1, set(), [(1.0,)])
    assert bisim_oracle(g1, 0, g2, 0, [t1, ttri], 1, 1)


def test_oracle_separates_cycles(ttri, tp, c3, c6):
    assert not bisim_oracle(c3, 0, c6, 0, [ttri, tp], 1, 1)


def test_oracle_agrees_with_refinement_path(registry):
    rng = random.Random(19)
    all_templates = registry.templates()
    for _ in range(60):
        g1 = random_graph(rng, rng.randint(1, 6))
        g2 = random_graph(rng, rng.randint(1, 6))
        v1 = rng.randrange(g1.num_nodes)
        v2 = rng.randrange(g2.num_nodes)
        templates = rng.sample(all_templates, rng.randint(1, len(all_templates)))
        level = rng.randint(0, 3)
        bound = rng.choice([None, 1, 2])
        expected = bisimilar_via_twl(g1, v1, g2, v2, templates, level, bound)
        assert bisim_oracle(g1, v1, g2, v2, templates, level, bound) == expected


def test_oracle_resource_guards(t1, ttri):
    big = cycle_graph(9)
    with pytest.raises(ResourceLimitError):
        bisim_oracle(big, 0, big, 0, [t1], 1, 1)
    small = cycle_graph(3)
    with pytest.raises(ResourceLimitError):
        bisim_oracle(small, 0, small, 0, [t1], 1, 4)
    # complete digraph on 6 nodes: 20 triangle embeddings per node
    k6 = LabelledGraph(
        6,
        {(u, v) for u in range(6) for v in range(6) if u != v},
        [(0.0,)] * 6,
    )
    with pytest.raises(ResourceLimitError):
        bisim_oracle(k6, 0, k6, 0, [ttri], 1, 1)


def test_bisimilarity_is_anti_monotone_in_the_level(registry):
    rng = random.Random(29)
    templates = registry.templates()
    for _ in range(40):
        g1 = random_graph(rng, rng.randint(1, 6))
        g2 = random_graph(rng, rng.randint(1, 6))
        v1 = rng.randrange(g1.num_nodes)
        v2 = rng.randrange(g2.num_nodes)
        bound = rng.choice([None, 1, 2])
        verdicts = [
            bisimilar_via_twl(g1, v1, g2, v2, templates, level, bound)
            for level in range(4)
        ]
        for lo, hi in zip(verdicts, verdicts[1:]):
            assert lo or not hi


def test_bisimilarity_is_monotone_in_the_bound(registry):
    rng = random.Random(37)
    templates = registry.templates()
    for _ in range(40):
        g1 = random_graph(rng, rng.randint(1, 6))
        g2 = random_graph(rng, rng.randint(1, 6))
        v1 = rng.randrange(g1.num_nodes)
        v2 = rng.randrange(g2.num_nodes)
        level = rng.randint(0, 3)
        at = {
            c: bisimilar_via_twl(g1, v1, g2, v2, templates, level, c)
            for c in (1, 2, 3, None)
        }
        assert not (at[None] and not at[3])
        assert not (at[3] and not at[2])
        assert not (at[2] and not at[1])


def test_oracle_matches_bijection_formulation_unbounded(registry):
    rng = random.Random(43)
    all_templates = registry.templates()
    for _ in range(40):
        g1 = random_graph(rng, rng.randint(1, 5))
        g2 = random_graph(rng, rng.randint(1, 5))
        v1 = rng.randrange(g1.num_nodes)
        v2 = rng.randrange(g2.num_nodes)
        templates = rng.sample(all_templates, rng.randint(1, 2))
        level = rng.randint(0, 2)
        assert bisim_oracle(g1, v1, g2, v2, templates, level, None) == \
            bijection_bisimilar(g1, v1, g2, v2, templates, level)


def test_classes_merge_isomorphic_pointed_graphs(registry, c3):
    rng = random.Random(47)
    copy, perm = permuted_copy(rng, c3)
    corpus = [PointedGraph(c3, 0), PointedGraph(copy, perm[0])]
    classes = bisim_classes(corpus, registry.templates(), 2, 2)
    assert classes == [[0, 1]]


def test_classes_split_three_and_six_cycles(ttri, tp, c3, c6):
    corpus = [PointedGraph(c3, 0), PointedGraph(c6, 0)]
    classes = bisim_classes(corpus, [ttri, tp], 1, 1)
    assert classes == [[0], [1]]
    assert len(classes) == 2


def test_classes_match_oracle_partition_on_all_small_graphs(t1):
    # every pointed graph on up to 3 unlabelled nodes
    corpus = []
    for n in (1, 2, 3):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for bits in product((False, True), repeat=len(pairs)):
            edges = frozenset(p for p, keep in zip(pairs, bits) if keep)
            g = LabelledGraph(n, edges, tuple((0.0,) for _ in range(n)))
            for v in range(n):
                corpus.append(PointedGraph(g, v))

    classes = bisim_classes(corpus, [t1], 2, 1)

    # greedy oracle partition: compare against one representative per class
    oracle_reps: list[int] = []
    oracle_assignment = {}
    for i, pg in enumerate(corpus):
        for rep in oracle_reps:
            rg = corpus[rep]
            if bisim_oracle(pg.graph, pg.point, rg.graph, rg.point, [t1], 2, 1):
                oracle_assignment[i] = rep
                break
        else:
            oracle_reps.append(i)
            oracle_assignment[i] = i

    twl_partition = {frozenset(cls) for cls in classes}
    oracle_partition: dict[int, set[int]] = {}
    for i, rep in oracle_assignment.items():
        oracle_partition.setdefault(rep, set()).add(i)
    assert twl_partition == {frozenset(s) for s in oracle_partition.values()}


def test_empty_corpus_rejected(t1):
    with pytest.raises(ValueError):
        bisim_classes([], [t1], 1, 1)
