import random

import pytest

from tgnn import (
    Coloring,
    LabelledGraph,
    TwlConfig,
    cycle_graph,
    distinguishes,
    permuted_copy,
    random_graph,
    run_twl,
    star_graph,
    stabilization_round,
)

from helpers import textbook_one_wl


def test_config_validation(t1):
    with pytest.raises(ValueError):
        TwlConfig((), 1)
    with pytest.raises(ValueError):
        TwlConfig((t1, t1), 1)
    with pytest.raises(ValueError):
        TwlConfig((t1,), 1, bound=0)


def test_three_vs_six_cycle_split_after_one_round(ttri, tp, c3, c6):
    coloring = run_twl([c3, c6], TwlConfig((ttri, tp), 1))
    c3_colors = {coloring.color(1, 0, v) for v in c3.nodes}
    c6_colors = {coloring.color(1, 1, v) for v in c6.nodes}
    assert c3_colors.isdisjoint(c6_colors)
    # uniform labels: one shared class at round 0
    assert coloring.class_count(0) == 1


def test_edge_template_never_splits_uniform_cycles(t1, c3, c6):
    for rounds in range(0, 6):
        coloring = run_twl([c3, c6], TwlConfig((t1,), rounds))
        assert coloring.class_count(rounds) == 1


def test_round_zero_colors_are_interned_labels(t1):
    g = LabelledGraph(3, set(), [(1.0,), (0.0,), (1.0,)])
    coloring = run_twl([g], TwlConfig((t1,), 0))
    assert coloring.color(0, 0, 0) == coloring.color(0, 0, 2)
    assert coloring.color(0, 0, 0) != coloring.color(0, 0, 1)


def test_mixed_dimensions_rejected(t1):
    g1 = LabelledGraph(1, set(), [(0.0,)])
    g2 = LabelledGraph(1, set(), [(0.0, 0.0)])
    with pytest.raises(ValueError, match="dimension"):
        run_twl([g1, g2], TwlConfig((t1,), 1))


def test_stabilization_on_distinct_initial_colors(t1):
    g = LabelledGraph(2, {(0, 1)}, [(1.0,), (0.0,)])
    assert stabilization_round([g], [t1]) == 1


def test_stabilization_on_uniform_cycle(t1, c6):
    assert stabilization_round([c6], [t1]) == 1


def test_stabilization_on_star(t1):
    assert stabilization_round([star_graph(3)], [t1]) == 2


def test_distinguishes_three_vs_six_cycle(ttri, tp, c3, c6):
    assert distinguishes(c3, 0, c6, 0, TwlConfig((ttri, tp), 1))


def test_identical_pointed_graphs_never_distinguished(ttri, tp, c6):
    for rounds in (0, 1, 3):
        for bound in (None, 1, 2):
            cfg = TwlConfig((ttri, tp), rounds, bound)
            assert not distinguishes(c6, 2, c6, 2, cfg)


def test_edge_template_cannot_split_cycles(t1, c3, c6):
    assert not distinguishes(c3, 0, c6, 0, TwlConfig((t1,), 5))


def test_rounds_refine_previous_partition(registry):
    rng = random.Random(23)
    templates = tuple(registry.templates())
    for _ in range(25):
        g = random_graph(rng, rng.randint(2, 7))
        coloring = run_twl([g], TwlConfig(templates, 3))
        for rnd in range(1, 4):
            finer = coloring.partition_at(rnd)
            coarser = coloring.partition_at(rnd - 1)
            for cls in finer:
                assert any(cls <= sup for sup in coarser)


def test_verdicts_invariant_under_node_relabelling(registry):
    rng = random.Random(17)
    templates = tuple(registry.templates())
    for _ in range(100):
        g = random_graph(rng, rng.randint(2, 6))
        h, perm = permuted_copy(rng, g)
        v = rng.randrange(g.num_nodes)
        w = rng.randrange(g.num_nodes)
        cfg = TwlConfig(templates, rng.randint(0, 3), rng.choice([None, 1, 2]))
        assert distinguishes(g, v, g, w, cfg) == distinguishes(h, perm[v], h, perm[w], cfg)


def test_single_edge_template_equals_textbook_one_wl(t1):
    rng = random.Random(31)
    for _ in range(200):
        graphs = [
            random_graph(rng, rng.randint(1, 8), dim=1)
            for _ in range(rng.randint(1, 2))
        ]
        rounds = rng.randint(0, 4)
        coloring = run_twl(graphs, TwlConfig((t1,), rounds))
        expected = textbook_one_wl(graphs, rounds)
        for rnd in range(rounds + 1):
            assert coloring.partition_at(rnd) == expected[rnd]


def test_smaller_bounds_distinguish_no_more_than_larger(registry):
    rng = random.Random(41)
    templates = tuple(registry.templates())
    for _ in range(60):
        g1 = random_graph(rng, rng.randint(2, 6))
        g2 = random_graph(rng, rng.randint(2, 6))
        v1 = rng.randrange(g1.num_nodes)
        v2 = rng.randrange(g2.num_nodes)
        rounds = rng.randint(0, 3)
        for c, c_prime in ((1, 2), (2, 3), (2, None)):
            low = distinguishes(g1, v1, g2, v2, TwlConfig(templates, rounds, c))
            high = distinguishes(g1, v1, g2, v2, TwlConfig(templates, rounds, c_prime))
            assert not (low and not high)


def test_runs_are_deterministic(registry, c3, c6):
    cfg = TwlConfig(tuple(registry.templates()), 3, 2)
    first = run_twl([c3, c6], cfg)
    second = run_twl([c3, c6], cfg)
    assert first == second
    assert isinstance(first, Coloring)
