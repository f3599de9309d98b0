from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from faultspan.graph import INF, FaultMode, FaultSet, Graph
from faultspan.verify import distance_by_relaxation


@st.composite
def small_graphs(draw, *, max_n=8, weighted=None, directed=None, min_weight=0, max_weight=6):
    n = draw(st.integers(1, max_n))
    directed = draw(st.booleans()) if directed is None else directed
    weighted = draw(st.booleans()) if weighted is None else weighted
    slots = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    chosen = draw(st.lists(st.sampled_from(slots), unique=True, max_size=len(slots))) if slots else []
    edges = []
    for u, v in chosen:
        w = draw(st.integers(min_weight, max_weight)) if weighted else 1
        edges.append((u, v, w))
    return Graph(n, edges, directed=directed, weighted=weighted)


def naive_verify(g: Graph, h_ids, pairs, f: int, beta, mode=FaultMode.EDGE):
    """Reference check: every fault set, every pair, relaxation distances, no reuse."""
    h = Graph(
        g.n,
        [(u, v, w) for u, v, w, k in g.edges() if k in h_ids],
        directed=g.directed,
        weighted=g.weighted,
    )
    id_map = {}
    for u, v, _, k in g.edges():
        hk = h.edge_id(u, v)
        if hk is not None:
            id_map[k] = hk
    universe = g.m if mode is FaultMode.EDGE else g.n
    for k in range(min(f, universe) + 1):
        for faults in itertools.combinations(range(universe), k):
            fg = FaultSet(mode, faults)
            if mode is FaultMode.EDGE:
                fh = FaultSet(mode, [id_map[x] for x in faults if x in id_map])
            else:
                fh = fg
            for s, t in pairs:
                dg = distance_by_relaxation(g, s, t, fg)
                dh = distance_by_relaxation(h, s, t, fh)
                if dh > dg + beta:
                    return False, faults, (s, t)
    return True, None, None


@pytest.fixture
def path_graph():
    return Graph(4, [(0, 1), (1, 2), (2, 3)])


__all__ = ["INF", "naive_verify", "small_graphs"]
