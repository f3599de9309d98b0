import json

import pytest

from faultspan.graph import INF, Graph, _spt, canonical_path
from faultspan.lowerbounds import (
    LbInstance,
    gen_dw1ft,
    gen_sh,
    gen_shq,
    gen_sxt,
    gen_th_tree,
    gen_w1ft_pairs,
    gen_w2ft,
    leaf_selection_gap,
    size_parameter,
    th_height,
    w2ft_query,
    w2ft_reconstruct_core,
)
from faultspan.verify import certify_core


def node_recurrence(h, d):
    # n(h) = d n(h-1) + sum_j (d - j)(l(h-1) + 3) counting new path nodes plus the spine
    if h == 0:
        return 1
    return d * node_recurrence(h - 1, d) + sum((d - j) * (th_height(h - 1, d) + 3) for j in range(d))


def test_h0_is_a_single_node():
    t = gen_th_tree(0, 3)
    assert t.graph.n == 1 and t.height == 0 and t.leaves == [t.root] and t.fault_sets == [frozenset()]


def test_h1_d2_counts():
    t = gen_th_tree(1, 2)
    assert len(t.leaves) == 2 and t.height == 6
    assert t.graph.n == 11 == node_recurrence(1, 2)


@pytest.mark.parametrize("h,d", [(2, 2), (2, 3), (3, 2)])
def test_node_count_matches_recurrence(h, d):
    assert gen_th_tree(h, d).graph.n == node_recurrence(h, d)


def test_tree_is_a_tree():
    t = gen_th_tree(2, 3)
    assert t.graph.m == t.graph.n - 1
    assert all(x != INF for x in _spt(t.graph, t.root, False).dist)


def test_leaf_faults_respect_budget_and_select():
    t = gen_th_tree(2, 3)
    for j, fs in enumerate(t.fault_sets):
        assert len(fs) <= 2
        assert leaf_selection_gap(t, j) >= 2


def test_invalid_tree_params():
    with pytest.raises(ValueError):
        gen_th_tree(-1, 2)
    with pytest.raises(ValueError):
        gen_th_tree(1, 0)


def test_sh_core_and_budget():
    inst = gen_sh(1, 2)
    assert len(inst.core_edges) == 4
    assert all(len(w) <= 2 for w in inst.witnesses.values())
    assert certify_core(inst).ok


def test_sh_h0_single_core_edge():
    inst = gen_sh(0, 5)
    assert inst.graph.n == 2 and inst.core_edges == [0]
    assert _spt(inst.graph, 0, False, {0}).dist[1] == INF


def test_shq_q1_equals_sh():
    a, b = gen_shq(1, 2, q=1), gen_sh(1, 2)
    assert a.graph == b.graph and a.core_edges == b.core_edges


def test_shq_size_from_budget():
    inst = gen_shq(1, q=2, n_budget=500)
    assert inst.params["d"] == size_parameter(500, 2, 1) == 5
    assert inst.graph.n == 2 * 2 * node_recurrence(1, 5)
    assert inst.graph.n <= 500


def test_sxt_core_size_formula():
    inst = gen_sxt(1, 2, 1, d_s=2, d_t=2)
    assert len(inst.core_edges) == 2 * 1 * 2 * 2
    assert len(inst.pairs) == 2


def test_sxt_single_pair_matches_sh():
    a, b = gen_sxt(1, 1, 1, d_s=3, d_t=3), gen_sh(1, 3)
    assert a.graph == b.graph


def test_w2ft_examples():
    inst = gen_w2ft(3)
    assert inst.graph.n == 12 and len(inst.core_edges) == 9
    assert w2ft_query(inst, 0, 1) == 6
    assert w2ft_query(gen_w2ft(3, drop_core=[(0, 1)]), 0, 1) == 7
    assert w2ft_query(inst, 2, 2) == 3


def test_w2ft_reconstruction_recovers_subset():
    keep = {(0, 0), (1, 2), (3, 1)}
    drop = [(i, j) for i in range(4) for j in range(4) if (i, j) not in keep]
    assert w2ft_reconstruct_core(gen_w2ft(4, drop)) == keep


def test_w1ft_pairs_small():
    assert gen_w1ft_pairs(4, 0).core_edges == []
    inst = gen_w1ft_pairs(4, 1)
    assert len(inst.core_edges) == 4 and certify_core(inst).ok
    with pytest.raises(ValueError):
        gen_w1ft_pairs(3, 4)


def test_w1ft_pairs_faulted_route_goes_through_spoke():
    n = 6
    inst = gen_w1ft_pairs(n, 3)
    for i, x in enumerate(inst.params["x_nodes"], start=1):
        e = inst.params["path_edges"][i - 1]
        assert _spt(inst.graph, 0, False, {e}).dist[x] == 2 * n - i


def test_dw1ft_single_zero_edge():
    k = Graph(2, [(0, 1, 0)], directed=True, weighted=True)
    inst = gen_dw1ft(k, [(0, 1)])
    s, t = inst.pairs[0]
    assert _spt(inst.graph, s, False).dist[t] == 0
    e = inst.params["spine_faults"][0]
    p = _spt(inst.graph, s, False, {e}).path_to(t)
    assert 0 in p.edges
    assert inst.core_edges == [0]


def test_dw1ft_rejects_bad_inner():
    k = Graph(3, [(0, 1, 1)], directed=True, weighted=True)
    with pytest.raises(ValueError):
        gen_dw1ft(k, [(1, 0)])
    with pytest.raises(ValueError):
        gen_dw1ft(Graph(2, [(0, 1)]), [(0, 1)])
    with pytest.raises(ValueError):
        gen_dw1ft(k, [(0, 1)], n_pairs=2)


def test_dw1ft_weight_dominates_inner_paths():
    k = Graph(4, [(0, 1, 9), (1, 2, 9), (2, 3, 9)], directed=True, weighted=True)
    inst = gen_dw1ft(k, [(0, 3)])
    assert inst.params["W"] > canonical_path(k, 0, 3).length


def test_manifest_round_trip():
    inst = gen_sh(1, 2)
    doc = json.loads(inst.manifest_json())
    assert set(doc) >= {"family", "params", "pairs", "core_edges", "witnesses", "margin"}
    back = LbInstance.from_manifest(inst.graph, doc)
    assert back.core_edges == inst.core_edges and back.witnesses == inst.witnesses
    assert certify_core(back).ok


def test_manifest_rejects_mismatched_graph():
    inst = gen_sh(1, 2)
    doc = inst.manifest()
    other = gen_sh(1, 3).graph
    with pytest.raises((ValueError, IndexError)):
        LbInstance.from_manifest(other, doc)
