import math

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import naive_verify, small_graphs
from faultspan.graph import FaultMode, Graph
from faultspan.randgraph import gnm_graph
from faultspan.sourcewise import (
    BuildParams,
    build_sourcewise_preserver,
    compute_target_edges,
    distance_threshold,
    log_factor,
    long_sample_size,
)
from faultspan.verify import verify_preserver

PROPS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_single_edge_graph():
    g = Graph(2, [(0, 1)])
    pre = build_sourcewise_preserver(g, [0], BuildParams(1))
    assert pre.edge_ids == {0}


def test_parameter_formulas():
    assert log_factor(1, 2) == 2.0
    assert log_factor(0, 0) == 1.0
    assert log_factor(100, 2) == pytest.approx(2 * math.log(100))
    assert distance_threshold(100, 4, 1) == math.ceil(math.sqrt(25 * math.log(100)))
    assert long_sample_size(10, 1, 1, 3) == 10
    assert long_sample_size(10_000, 100, 1, 3) == math.ceil(3 * 100 * math.log(10_000))


def test_params_validation():
    with pytest.raises(ValueError):
        BuildParams(-1)
    with pytest.raises(ValueError):
        BuildParams(1, c_hit=0)
    assert BuildParams(1, "vertex").mode is FaultMode.VERTEX


def test_input_validation():
    g = Graph(3, [(0, 1, 2)], weighted=True)
    with pytest.raises(ValueError):
        build_sourcewise_preserver(g, [0], BuildParams(1))
    g = Graph(3, [(0, 1)])
    with pytest.raises(ValueError):
        build_sourcewise_preserver(g, [], BuildParams(1))
    with pytest.raises(ValueError):
        build_sourcewise_preserver(g, [3], BuildParams(1))


def test_f_zero_is_a_bfs_forest():
    g = gnm_graph(30, 80, seed=3)
    pre = build_sourcewise_preserver(g, [0], BuildParams(0))
    assert len(pre) <= g.n - 1
    assert verify_preserver(g, pre, [(0, v) for v in range(g.n)], 0).ok


def test_round_states_for_one_target():
    g = gnm_graph(40, 120, seed=1)
    te = compute_target_edges(g, [0, 1], 7, BuildParams(2, seed=4), keep_states=True)
    assert len(te.rounds) == 3
    first = te.rounds[0]
    assert first.S_i == {0, 1}
    assert 7 not in first.S_short
    assert all(1 <= first.tree_dist[v] <= first.d_i for v in first.S_short)
    for r, nxt in zip(te.rounds, te.rounds[1:]):
        assert nxt.S_i == r.S_short | r.S_long
    # every collected edge touches the target
    for e in te.edges:
        assert 7 in g.endpoints(e)
    te.check_accounting()


def test_edge_mode_removes_tree_edges_between_rounds():
    g = gnm_graph(25, 60, seed=2)
    te = compute_target_edges(g, [0], 5, BuildParams(1), keep_states=True)
    r0, r1 = te.rounds
    assert not (r0.tree_edges & r1.tree_edges)


def test_vertex_mode_never_kills_target():
    g = gnm_graph(25, 60, seed=2)
    te = compute_target_edges(g, [0, 3], 5, BuildParams(2, "vertex"), keep_states=True)
    for r in te.rounds:
        assert 5 in r.alive_nodes


def test_threads_do_not_change_result():
    g = gnm_graph(80, 300, seed=9)
    a = build_sourcewise_preserver(g, [1, 2], BuildParams(2, seed=11))
    b = build_sourcewise_preserver(g, [1, 2], BuildParams(2, seed=11), threads=4)
    assert a.edge_ids == b.edge_ids
    assert a.metadata() == b.metadata()


def test_seed_changes_only_the_sample():
    g = gnm_graph(300, 900, seed=5)
    a = compute_target_edges(g, [0], 10, BuildParams(1, seed=1), keep_states=True)
    b = compute_target_edges(g, [0], 10, BuildParams(1, seed=2), keep_states=True)
    assert a.rounds[0].S_long_size < g.n
    assert a.rounds[0].S_long != b.rounds[0].S_long
    assert a.rounds[0].tree_edges == b.rounds[0].tree_edges


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("mode", ["edge", "vertex"])
def test_correct_when_hitting_set_is_a_real_sample(seed, mode):
    g = gnm_graph(200, 420, seed=seed)
    params = BuildParams(1, mode, seed)
    pre = build_sourcewise_preserver(g, [0], params)
    assert any(r.S_long_size < g.n for te in pre.per_target for r in te.rounds)
    assert verify_preserver(g, pre, [(0, v) for v in range(g.n)], 1, 0, mode).ok


@PROPS
@given(small_graphs(max_n=7, weighted=False), st.data())
def test_matches_naive_reference(g, data):
    f = data.draw(st.integers(1, 2))
    mode = data.draw(st.sampled_from([FaultMode.EDGE, FaultMode.VERTEX]))
    sources = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=3))
    pre = build_sourcewise_preserver(g, sources, BuildParams(f, mode, data.draw(st.integers(0, 99))))
    pairs = [(s, v) for s in sorted(sources) for v in range(g.n)]
    ok, faults, pair = naive_verify(g, pre.edge_ids, pairs, f, 0, mode)
    assert ok, (faults, pair)


def test_metadata_is_json_ready():
    g = gnm_graph(12, 20, seed=0)
    pre = build_sourcewise_preserver(g, [0], BuildParams(1))
    doc = pre.metadata()
    assert doc["preserver_edges"] == len(pre)
    assert len(doc["per_target"]) == g.n
    assert doc["per_target"][0]["rounds"][0]["i"] == 0
    assert pre.metadata_json().endswith("\n")
