import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import naive_verify, small_graphs
from faultspan.graph import Graph, canonical_path
from faultspan.randgraph import gnm_graph
from faultspan.weighted import (
    build_1ft_st_directed,
    build_1ft_st_undirected,
    detour_segments,
    find_swap_edge,
    pairwise_preserver,
    replacement_path,
)

PROPS = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def square():
    # 0-1-2 is the shortest route, 0-3-2 the detour
    return Graph(4, [(0, 1, 1), (1, 2, 1), (0, 3, 2), (3, 2, 2)], weighted=True)


def test_replacement_path_avoids_fault():
    rep = replacement_path(square(), 0, 2, 1)
    assert rep.nodes == (0, 3, 2) and rep.length == 4


def test_swap_edge_on_square():
    sw = find_swap_edge(square(), 0, 2, 1)
    # 3 has no shortest path from 0 through edge 1-2; 2 does
    assert (sw.x, sw.y, sw.edge) == (3, 2, 3)


def test_swap_edge_errors():
    g = square()
    with pytest.raises(ValueError):
        find_swap_edge(g, 0, 2, 2)
    with pytest.raises(ValueError):
        find_swap_edge(Graph(2, [(0, 1)], directed=True), 0, 1, 0)
    bridge = Graph(3, [(0, 1, 1), (1, 2, 1)], weighted=True)
    assert find_swap_edge(bridge, 0, 2, 0) is None


def test_undirected_builder_size_and_stats():
    g = gnm_graph(60, 200, weights=(1, 20), seed=4)
    pre = build_1ft_st_undirected(g, 0, 59)
    assert len(pre) <= 3 * g.n - 3
    assert pre.stats["fallback_faults"] == 0
    assert pre.stats["patched_faults"] + pre.stats["skipped_disconnecting_faults"] <= len(canonical_path(g, 0, 59))


def test_directed_unreachable_target_gives_empty_preserver():
    g = Graph(3, [(1, 0, 1)], directed=True, weighted=True)
    pre = build_1ft_st_directed(g, 0, 2)
    assert len(pre) == 0


def test_undirected_builder_rejects_directed():
    with pytest.raises(ValueError):
        build_1ft_st_undirected(Graph(2, [(0, 1)], directed=True), 0, 1)


def test_pairwise_preserver_is_union_of_paths():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)], directed=True)
    assert pairwise_preserver(g, [(0, 2), (1, 3)]) == {0, 1, 2}
    assert pairwise_preserver(g, [(0, 3)], banned_edges=[1]) == frozenset()


def test_detour_segments():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    p = canonical_path(g, 0, 4)
    assert detour_segments(p, {0, 3}) == [(1, 3)]
    assert detour_segments(p, {1}) == [(0, 1), (2, 4)]
    assert detour_segments(p, set()) == [(0, 4)]


@PROPS
@given(small_graphs(max_n=7, weighted=True, directed=False), st.data())
def test_undirected_matches_naive_reference(g, data):
    s, t = data.draw(st.integers(0, g.n - 1)), data.draw(st.integers(0, g.n - 1))
    pre = build_1ft_st_undirected(g, s, t)
    assert len(pre) <= max(0, 3 * g.n - 3)
    ok, faults, _ = naive_verify(g, pre.edge_ids, [(s, t)], 1, 0)
    assert ok, faults


@PROPS
@given(small_graphs(max_n=7, weighted=True, directed=True), st.data())
def test_directed_matches_naive_reference(g, data):
    s, t = data.draw(st.integers(0, g.n - 1)), data.draw(st.integers(0, g.n - 1))
    pre = build_1ft_st_directed(g, s, t)
    ok, faults, _ = naive_verify(g, pre.edge_ids, [(s, t)], 1, 0)
    assert ok, faults
