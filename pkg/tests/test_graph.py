from fractions import Fraction
import io

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import small_graphs
from faultspan.graph import (
    INF,
    Direction,
    FaultMode,
    FaultSet,
    Graph,
    GraphFormatError,
    canonical_path,
    canonical_spt,
    delete_edges,
    distance_avoiding,
    format_graph,
    induce_without_vertices,
    parse_graph,
    read_graph,
    subgraph,
    write_graph,
)
from faultspan.verify import distance_by_relaxation

PROPS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_edge_ids_follow_input_order():
    g = Graph(3, [(2, 1), (0, 1)])
    assert g.edge(0) == (2, 1, 1)
    assert g.edge_id(1, 2) == 0
    assert g.edge_id(1, 0) == 1
    assert g.edge_id(0, 2) is None


@pytest.mark.parametrize(
    "edges, kwargs",
    [
        ([(0, 0)], {}),
        ([(0, 1), (1, 0)], {}),
        ([(0, 3)], {}),
        ([(0, 1, -1)], {"weighted": True}),
        ([(0, 1, 0.5)], {"weighted": True}),
        ([(0, 1, 2, 3)], {}),
    ],
)
def test_rejects_malformed_edges(edges, kwargs):
    with pytest.raises(ValueError):
        Graph(3, edges, **kwargs)


def test_directed_antiparallel_arcs_are_distinct():
    g = Graph(2, [(0, 1), (1, 0)], directed=True)
    assert g.m == 2


def test_unweighted_forces_unit_weights():
    g = Graph(2, [(0, 1, 7)])
    assert g.weight(0) == 1


def test_fraction_weights_stay_exact():
    g = Graph(3, [(0, 1, Fraction(1, 3)), (1, 2, Fraction(2, 3)), (0, 2, 1)], weighted=True)
    assert distance_avoiding(g, 0, 2) == 1
    assert canonical_path(g, 0, 2).nodes == (0, 2)


def test_bfs_tie_break_prefers_smallest_predecessor():
    # 0 reaches 3 through 1 or 2 at equal length
    g = Graph(4, [(0, 2), (2, 3), (0, 1), (1, 3)])
    assert canonical_path(g, 0, 3).nodes == (0, 1, 3)


def test_dijkstra_tie_break_prefers_smallest_predecessor():
    g = Graph(5, [(0, 4, 1), (4, 3, 2), (0, 1, 2), (1, 3, 1), (0, 2, 3)], weighted=True)
    assert canonical_path(g, 0, 3).nodes == (0, 1, 3)


def test_zero_weight_cycle_keeps_tree_acyclic():
    g = Graph(4, [(0, 1, 0), (1, 2, 0), (0, 2, 0), (2, 3, 0)], weighted=True)
    tree = canonical_spt(g, 0)
    for v in range(4):
        assert tree.path_to(v).nodes[0] == 0


def test_into_root_tree_on_directed_graph():
    g = Graph(3, [(0, 2), (1, 2), (0, 1)], directed=True)
    tree = canonical_spt(g, 2, Direction.INTO_ROOT)
    assert tree.dist == (1, 1, 0)
    assert tree.path_to(0).nodes == (0, 2)
    assert canonical_spt(g, 2).dist == (INF, INF, 0)


def test_distance_avoiding_modes(path_graph):
    assert distance_avoiding(path_graph, 0, 3) == 3
    assert distance_avoiding(path_graph, 0, 3, FaultSet.edges([1])) == INF
    assert distance_avoiding(path_graph, 0, 3, FaultSet.vertices([3])) == INF
    assert distance_avoiding(path_graph, 0, 1, FaultSet.vertices([3])) == 1
    with pytest.raises(ValueError):
        distance_avoiding(path_graph, 0, 3, FaultSet.edges([9]))


def test_fault_budget_is_enforced():
    with pytest.raises(ValueError):
        FaultSet.edges([1, 2, 3], budget=2)
    assert FaultMode.parse("vertex") is FaultMode.VERTEX


def test_delete_edges_and_subgraph():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    h = delete_edges(g, [1])
    assert h.m == 3 and h.edge_id(1, 2) is None
    s = subgraph(g, [3, 0])
    assert [e[:2] for e in s.edges()] == [(0, 1), (0, 3)]
    k = induce_without_vertices(g, [0])
    assert k.n == 4 and k.m == 2


def test_text_round_trip():
    g = Graph(4, [(0, 1, 5), (1, 2, 0), (3, 1, 2)], directed=True, weighted=True)
    text = format_graph(g)
    assert text.splitlines()[0] == "graph directed weighted 4 3"
    assert parse_graph(text) == g
    buf = io.StringIO()
    write_graph(g, buf)
    buf.seek(0)
    assert read_graph(buf) == g


@pytest.mark.parametrize(
    "text",
    [
        "",
        "graph undirected unweighted 3\n",
        "graph sideways unweighted 3 0\n",
        "graph undirected unweighted 3 2\ne 0 1\n",
        "graph undirected weighted 3 1\ne 0 1\n",
        "graph undirected unweighted 3 1\ne 0 x\n",
        "graph undirected unweighted 3 1\ne 0 0\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_comments_and_blank_lines_are_ignored():
    g = parse_graph("# header comment\ngraph undirected unweighted 2 1\n\ne 0 1  # only edge\n")
    assert g.m == 1


@PROPS
@given(small_graphs(), st.data())
def test_distances_match_relaxation(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    tree = canonical_spt(g, s)
    for t in range(g.n):
        assert tree.dist[t] == distance_by_relaxation(g, s, t)


@PROPS
@given(small_graphs(), st.data())
def test_distances_match_networkx(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    ref = nx.DiGraph() if g.directed else nx.Graph()
    ref.add_nodes_from(range(g.n))
    ref.add_weighted_edges_from((u, v, w) for u, v, w, _ in g.edges())
    expected = nx.single_source_dijkstra_path_length(ref, s)
    tree = canonical_spt(g, s)
    for t in range(g.n):
        assert tree.dist[t] == expected.get(t, INF)


@PROPS
@given(small_graphs(min_weight=1), st.data())
def test_parent_is_smallest_tight_predecessor(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    tree = canonical_spt(g, s)
    for v in range(g.n):
        if v == s or tree.dist[v] == INF:
            continue
        tight = [u for u, w, _ in g.in_arcs(v) if tree.dist[u] + w == tree.dist[v]]
        assert tree.parent[v] == min(tight)


@PROPS
@given(small_graphs(min_weight=1), st.data())
def test_canonical_paths_are_prefix_closed(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    tree = canonical_spt(g, s)
    for t in range(g.n):
        p = tree.path_to(t)
        if p is None:
            continue
        for i, v in enumerate(p.nodes):
            assert canonical_path(g, s, v).nodes == p.nodes[: i + 1]


@PROPS
@given(small_graphs(), st.data())
def test_reversal_duality(g, data):
    t = data.draw(st.integers(0, g.n - 1))
    into = canonical_spt(g, t, Direction.INTO_ROOT)
    back = canonical_spt(g.reversed(), t)
    assert into.dist == back.dist
    for v in range(g.n):
        p = into.path_to(v)
        if p is not None:
            assert p.nodes[0] == v and p.nodes[-1] == t
            assert sum(g.weight(e) for e in p.edges) == p.length


@PROPS
@given(small_graphs(), st.data())
def test_faults_never_shorten_distances(g, data):
    if g.m == 0:
        return
    s = data.draw(st.integers(0, g.n - 1))
    t = data.draw(st.integers(0, g.n - 1))
    small = data.draw(st.sets(st.integers(0, g.m - 1), max_size=2))
    big = small | data.draw(st.sets(st.integers(0, g.m - 1), max_size=2))
    d0 = distance_avoiding(g, s, t)
    d1 = distance_avoiding(g, s, t, FaultSet.edges(small))
    d2 = distance_avoiding(g, s, t, FaultSet.edges(big))
    assert d0 <= d1 <= d2
    assert d2 == distance_by_relaxation(g, s, t, FaultSet.edges(big))
