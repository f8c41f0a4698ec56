import random

import pytest
from hypothesis import given, settings, strategies as st

from tgnn import (
    LabelledGraph,
    Template,
    builtin_registry,
    count_embeddings,
    enumerate_embeddings,
    random_graph,
    star_graph,
    template_automorphisms,
)

from helpers import brute_force_embeddings


def test_edge_template_in_three_cycle(t1, c3):
    embs = enumerate_embeddings(t1, c3, 0)
    assert embs == [(0, 1)]
    assert len(embs) == c3.out_degree(0)


def test_triangle_and_path_in_three_cycle(ttri, tp, c3):
    assert enumerate_embeddings(ttri, c3, 0) == [(0, 1, 2)]
    assert enumerate_embeddings(tp, c3, 0) == []


def test_triangle_and_path_in_six_cycle(ttri, tp, c6):
    assert enumerate_embeddings(tp, c6, 0) == [(0, 1, 2)]
    assert enumerate_embeddings(ttri, c6, 0) == []


def test_count_on_star_equals_out_degree(t1):
    star = star_graph(3)
    assert count_embeddings(t1, star, 0) == 3
    assert count_embeddings(t1, star, 1) == 0


def test_count_zero_when_template_larger_than_graph(ttri):
    g = LabelledGraph(2, {(0, 1)}, [(0.0,), (0.0,)])
    assert count_embeddings(ttri, g, 0) == 0


def test_non_edge_template_counts_non_neighbours(t2, c3):
    # node 1 is a neighbour of 0, node 2 is not
    assert enumerate_embeddings(t2, c3, 0) == [(0, 2)]
    assert count_embeddings(t2, c3, 0) == 1


def test_output_is_lexicographic_and_duplicate_free(t1):
    g = LabelledGraph(4, {(0, 3), (0, 1), (0, 2)}, [(0.0,)] * 4)
    embs = enumerate_embeddings(t1, g, 0)
    assert embs == sorted(embs)
    assert len(set(embs)) == len(embs)


def test_self_loop_semantics():
    loop_pos = Template("loop+", 1, frozenset({(0, 0)}), frozenset())
    loop_neg = Template("loop-", 1, frozenset(), frozenset({(0, 0)}))
    g = LabelledGraph(2, {(0, 0)}, [(0.0,), (0.0,)])
    assert enumerate_embeddings(loop_pos, g, 0) == [(0,)]
    assert enumerate_embeddings(loop_pos, g, 1) == []
    assert enumerate_embeddings(loop_neg, g, 0) == []
    assert enumerate_embeddings(loop_neg, g, 1) == [(1,)]


@st.composite
def graph_template_node(draw):
    n = draw(st.integers(1, 6))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    g = LabelledGraph(n, frozenset(edges), tuple((0.0,) for _ in range(n)))
    t = draw(st.sampled_from(builtin_registry().templates()))
    v = draw(st.integers(0, n - 1))
    return t, g, v


@settings(max_examples=150, deadline=None)
@given(graph_template_node())
def test_matches_exhaustive_injective_filtering(case):
    t, g, v = case
    assert sorted(enumerate_embeddings(t, g, v)) == sorted(brute_force_embeddings(t, g, v))
    assert count_embeddings(t, g, v) == len(brute_force_embeddings(t, g, v))


def test_embedding_set_is_automorphism_closed():
    rng = random.Random(11)
    fan = Template("fan", 3, frozenset({(0, 1), (0, 2)}), frozenset())
    for _ in range(30):
        g = random_graph(rng, rng.randint(2, 6))
        v = rng.randrange(g.num_nodes)
        embs = set(enumerate_embeddings(fan, g, v))
        for f in embs:
            for perm in template_automorphisms(fan):
                composed = tuple(f[perm[i]] for i in range(3))
                assert composed in embs


def test_edge_counts_match_degrees_on_random_graphs(t1, t2):
    rng = random.Random(5)
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 7))
        v = rng.randrange(g.num_nodes)
        assert count_embeddings(t1, g, v) == g.out_degree(v)
        non_neighbours = sum(
            1 for u in g.nodes if u != v and not g.has_edge(v, u)
        )
        assert count_embeddings(t2, g, v) == non_neighbours


def test_invalid_node_rejected(t1, c3):
    with pytest.raises(ValueError):
        enumerate_embeddings(t1, c3, 9)
