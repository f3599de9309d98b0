"""Generators for the lower-bound instance families.

Each generator returns an :class:`LbInstance`: the graph, its demand pairs,
the "core" edges every fault-tolerant preserver/spanner must keep, and for
each core edge a witness fault set that makes it indispensable.  The
instances are self-certifying through :func:`faultspan.verify.certify_core`.

Families:

* ``th``   -- the recursive tree whose leaves can be singled out by ``h`` faults,
* ``sh``   -- two such trees joined by a complete bipartite leaf core,
* ``shq``  -- ``q`` chained ``sh`` copies (additive stretch ``2q``),
* ``sxt``  -- one tree per source and per target with a shared core,
* ``w2ft`` -- weighted single pair, two faults, quadratic core,
* ``w1ft-pairs`` -- weighted pairs, one fault, ``n * p`` core,
* ``dw1ft`` -- directed weighted single pair wrapped around an inner graph.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from faultspan.graph import INF, FaultMode, FaultSet, Graph, _spt, canonical_path

__all__ = [
    "LbInstance",
    "ThTree",
    "gen_dw1ft",
    "gen_sh",
    "gen_shq",
    "gen_sxt",
    "gen_th_tree",
    "gen_w1ft_pairs",
    "gen_w2ft",
    "leaf_distances",
    "leaf_selection_gap",
    "size_parameter",
    "th_height",
    "th_node_bound",
    "w2ft_query",
    "w2ft_reconstruct_core",
]


def th_height(h: int, d: int) -> int:
    return 3 * ((d + 1) ** h - 1)


def th_node_bound(h: int, d: int) -> float:
    return 1.5 * (h + 1) * (d + 1) ** (h + 1)


def size_parameter(n_budget: int, copies: int, h: int) -> int:
    """``floor((n / (3 * copies * (h + 1)))^(1/(h+1)) - 1)``, at least 1."""
    raw = (n_budget / (3 * copies * (h + 1))) ** (1 / (h + 1)) - 1
    return max(1, math.floor(raw + 1e-9))


class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.edges: list[tuple[int, int, int]] = []

    def node(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, u: int, v: int, w: int = 1) -> int:
        self.edges.append((u, v, w))
        return len(self.edges) - 1

    def chain(self, u: int, v: int, length: int) -> None:
        prev = u
        for _ in range(length - 1):
            nxt = self.node()
            self.edge(prev, nxt)
            prev = nxt
        self.edge(prev, v)


@dataclass
class _TreeParts:
    root: int
    leaves: list[int]
    faults: list[frozenset[int]]
    height: int
    nodes: int


def _build_th(b: _Builder, h: int, d: int) -> _TreeParts:
    first = b.n
    if h == 0:
        r = b.node()
        return _TreeParts(r, [r], [frozenset()], 0, 1)
    subs = [_build_th(b, h - 1, d) for _ in range(d)]
    sub_height = subs[0].height
    spine = [b.node() for _ in range(d)]
    spine_edges = [b.edge(spine[j], spine[j + 1]) for j in range(d - 1)]
    for j in range(d):
        b.chain(spine[j], subs[j].root, (d - j) * (sub_height + 3))
    leaves: list[int] = []
    faults: list[frozenset[int]] = []
    for j, sub in enumerate(subs):
        cut = {spine_edges[j]} if j < d - 1 else set()
        leaves.extend(sub.leaves)
        faults.extend(fs | cut for fs in sub.faults)
    height = sub_height + d * (sub_height + 3)
    return _TreeParts(spine[0], leaves, faults, height, b.n - first)


@dataclass
class ThTree:
    graph: Graph
    root: int
    height: int
    leaves: list[int]
    fault_sets: list[frozenset[int]]
    h: int
    d: int

    def faults(self, j: int) -> FaultSet:
        return FaultSet.edges(self.fault_sets[j], budget=self.h)


def gen_th_tree(h: int, d: int, *, check: bool = True) -> ThTree:
    """The recursive tree with ``d^h`` ordered leaves and per-leaf fault sets.

    With ``check`` (the default) every leaf's fault set is verified to leave
    that leaf strictly closest to the root, by a gap of at least 2.

    Raises:
        ValueError: if ``h < 0`` or ``d < 1``.
    """
    if h < 0 or d < 1:
        raise ValueError("need h >= 0 and d >= 1")
    b = _Builder()
    parts = _build_th(b, h, d)
    g = Graph(b.n, b.edges)
    tree = ThTree(g, parts.root, parts.height, parts.leaves, parts.faults, h, d)
    assert parts.height == th_height(h, d)
    assert len(parts.leaves) == d**h
    assert parts.nodes <= th_node_bound(h, d)
    if check:
        for j in range(len(tree.leaves)):
            assert leaf_selection_gap(tree, j) >= 2, f"leaf {j} is not singled out by its faults"
    return tree


def leaf_distances(tree: ThTree, j: int) -> list:
    """Root-to-leaf distances in the tree after deleting leaf ``j``'s fault set."""
    spt = _spt(tree.graph, tree.root, False, tree.fault_sets[j])
    return [spt.dist[leaf] for leaf in tree.leaves]


def leaf_selection_gap(tree: ThTree, j: int):
    """How much farther the nearest other reachable leaf is than leaf ``j``.

    ``INF`` when no other leaf stays reachable; negative or zero when leaf
    ``j`` is not the unique closest one.
    """
    dist = leaf_distances(tree, j)
    others = [x for k, x in enumerate(dist) if k != j and x != INF]
    if dist[j] == INF:
        return -INF
    return min(others) - dist[j] if others else INF


@dataclass
class LbInstance:
    """A lower-bound graph with its demand pairs, core edges and witnesses.

    ``margin`` is the distance increase each witness certifies for its own
    core edge (removing the edge under its witness faults raises some
    demand-pair distance by at least ``margin``).  ``budget`` bounds the
    witness sizes.
    """

    family: str
    graph: Graph
    pairs: list[tuple[int, int]]
    core_edges: list[int]
    witnesses: dict[int, FaultSet]
    margin: int
    budget: int
    params: dict = field(default_factory=dict)
    sources: list[int] = field(default_factory=list)
    targets: list[int] = field(default_factory=list)

    def manifest(self) -> dict:
        g = self.graph
        return {
            "family": self.family,
            "params": self.params,
            "n": g.n,
            "m": g.m,
            "pairs": [list(p) for p in self.pairs],
            "core_edges": [[*g.endpoints(e), e] for e in self.core_edges],
            "witnesses": {str(e): sorted(fs.members) for e, fs in sorted(self.witnesses.items())},
            "margin": self.margin,
            "budget": self.budget,
            "mode": "edge",
        }

    def manifest_json(self) -> str:
        return json.dumps(self.manifest(), indent=2) + "\n"

    @classmethod
    def from_manifest(cls, graph: Graph, doc: dict) -> "LbInstance":
        budget = int(doc["budget"])
        mode = FaultMode.parse(doc.get("mode", "edge"))
        core = [int(c[2]) for c in doc["core_edges"]]
        for u, v, e in doc["core_edges"]:
            if graph.endpoints(int(e)) != (int(u), int(v)):
                raise ValueError(f"manifest core edge {e} does not match the graph")
        wit = {int(k): FaultSet(mode, frozenset(v), budget) for k, v in doc["witnesses"].items()}
        return cls(
            doc["family"],
            graph,
            [tuple(p) for p in doc["pairs"]],
            core,
            wit,
            int(doc["margin"]),
            budget,
            dict(doc.get("params", {})),
        )


def _attach_core(b: _Builder, left: _TreeParts, right: _TreeParts, core: list[int], wit: dict, budget: int) -> None:
    for a, la in enumerate(left.leaves):
        for c, lc in enumerate(right.leaves):
            e = b.edge(la, lc)
            core.append(e)
            wit[e] = FaultSet.edges(left.faults[a] | right.faults[c], budget=budget)


def gen_sh(h: int, d: int) -> LbInstance:
    """Two trees rooted at ``s`` and ``t`` with all leaf-to-leaf edges as the core."""
    if h < 0 or d < 1:
        raise ValueError("need h >= 0 and d >= 1")
    b = _Builder()
    ts = _build_th(b, h, d)
    tt = _build_th(b, h, d)
    core: list[int] = []
    wit: dict[int, FaultSet] = {}
    _attach_core(b, ts, tt, core, wit, 2 * h)
    g = Graph(b.n, b.edges)
    return LbInstance("sh", g, [(ts.root, tt.root)], core, wit, 2, 2 * h, {"h": h, "d": d},
                      [ts.root], [tt.root])


def gen_shq(h: int, d: int | None = None, q: int = 1, n_budget: int | None = None) -> LbInstance:
    """``q`` chained copies of the ``sh`` graph; the pair is (first source, last target).

    Each core edge's witness only uses the faults of its own copy, so it
    certifies a margin of 2; faulting one witness in every copy together
    costs ``2q`` (recorded as ``params["chain_margin"]``).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if d is None:
        if n_budget is None:
            raise ValueError("give either d or n_budget")
        d = size_parameter(n_budget, q, h)
    if h < 0 or d < 1:
        raise ValueError("need h >= 0 and d >= 1")
    b = _Builder()
    core: list[int] = []
    wit: dict[int, FaultSet] = {}
    copies = []
    prev_target = None
    for _ in range(q):
        ts = _build_th(b, h, d)
        tt = _build_th(b, h, d)
        first_core = len(core)
        _attach_core(b, ts, tt, core, wit, 2 * h)
        copies.append(core[first_core:])
        if prev_target is not None:
            b.edge(prev_target, ts.root)
        prev_target = tt.root
        if len(copies) == 1:
            s = ts.root
    g = Graph(b.n, b.edges)
    params = {"h": h, "d": d, "q": q, "chain_margin": 2 * q, "copy_cores": copies}
    if n_budget is not None:
        params["n_budget"] = n_budget
    return LbInstance("shq", g, [(s, prev_target)], core, wit, 2, 2 * h, params, [s], [prev_target])


def gen_sxt(
    f: int,
    n_sources: int,
    n_targets: int,
    n_budget: int | None = None,
    *,
    d_s: int | None = None,
    d_t: int | None = None,
) -> LbInstance:
    """One tree per source and per target, complete core between all their leaves."""
    if f < 0 or n_sources < 1 or n_targets < 1:
        raise ValueError("need f >= 0 and at least one source and target")
    if d_s is None or d_t is None:
        if n_budget is None:
            raise ValueError("give n_budget or both d_s and d_t")
        d_s = d_s or size_parameter(n_budget, n_sources, f)
        d_t = d_t or size_parameter(n_budget, n_targets, f)
    b = _Builder()
    src_trees = [_build_th(b, f, d_s) for _ in range(n_sources)]
    tgt_trees = [_build_th(b, f, d_t) for _ in range(n_targets)]
    core: list[int] = []
    wit: dict[int, FaultSet] = {}
    for ts in src_trees:
        for tt in tgt_trees:
            _attach_core(b, ts, tt, core, wit, 2 * f)
    g = Graph(b.n, b.edges)
    sources = [t.root for t in src_trees]
    targets = [t.root for t in tgt_trees]
    params = {"f": f, "n_sources": n_sources, "n_targets": n_targets, "d_s": d_s, "d_t": d_t}
    if n_budget is not None:
        params["n_budget"] = n_budget
    pairs = [(s, t) for s in sources for t in targets]
    return LbInstance("sxt", g, pairs, core, wit, 2, 2 * f, params, sources, targets)


def gen_w2ft(n_param: int, drop_core: Iterable[tuple[int, int]] = ()) -> LbInstance:
    """Weighted two-fault gadget with an ``n_param x n_param`` core.

    Node layout: ``s_i = i``, ``t_i = n + i``, ``x_i = 2n + i``,
    ``y_i = 3n + i``.  ``drop_core`` removes the listed ``(i, j)`` core edges,
    giving the instances queried by the reconstruction experiment.
    """
    n = n_param
    if n < 1:
        raise ValueError("n_param must be >= 1")
    drop = {(int(i), int(j)) for i, j in drop_core}
    b = _Builder()
    for _ in range(4 * n):
        b.node()
    s_edges = [b.edge(i, i + 1, 0) for i in range(n - 1)]
    t_edges = [b.edge(n + i, n + i + 1, 0) for i in range(n - 1)]
    for i in range(n):
        b.edge(i, 2 * n + i, n - i)
        b.edge(n + i, 3 * n + i, n - i)
    core: list[int] = []
    wit: dict[int, FaultSet] = {}
    index: dict[str, list[int]] = {}
    for i in range(n):
        for j in range(n):
            if (i, j) in drop:
                continue
            e = b.edge(2 * n + i, 3 * n + j, 1)
            core.append(e)
            members = set()
            if i < n - 1:
                members.add(s_edges[i])
            if j < n - 1:
                members.add(t_edges[j])
            wit[e] = FaultSet.edges(members, budget=2)
            index[f"{i},{j}"] = [e]
    g = Graph(b.n, b.edges, weighted=True)
    params = {"n_param": n, "dropped": sorted([list(p) for p in drop]), "core_index": index,
              "s_path_edges": s_edges, "t_path_edges": t_edges}
    return LbInstance("w2ft", g, [(0, n)], core, wit, 1, 2, params, [0], [n])


def w2ft_query(inst: LbInstance, i: int, j: int):
    """``s``-``t`` distance in a ``w2ft`` graph after failing the ``i``-th and ``j``-th path edges."""
    n = inst.params["n_param"]
    banned = set()
    if i < n - 1:
        banned.add(inst.params["s_path_edges"][i])
    if j < n - 1:
        banned.add(inst.params["t_path_edges"][j])
    return _spt(inst.graph, 0, False, banned).dist[n]


def w2ft_reconstruct_core(inst: LbInstance) -> set[tuple[int, int]]:
    """Recover which core edges exist using only faulted ``s``-``t`` distance queries."""
    n = inst.params["n_param"]
    return {(i, j) for i in range(n) for j in range(n) if w2ft_query(inst, i, j) == 2 * n - i - j + 1}


def gen_w1ft_pairs(n_param: int, p: int) -> LbInstance:
    """Weighted one-fault pairwise gadget with an ``n_param x p`` core.

    Node layout with 1-based names: ``p_k = k - 1`` for
    ``k = 1..n+1``, ``v_j = n + j`` for ``j = 1..n``, ``x_i = 2n + i`` for
    ``i = 1..p``.  The source is ``p_1``.
    """
    n = n_param
    if n < 1 or not 0 <= p <= n:
        raise ValueError("need n_param >= 1 and 0 <= p <= n_param")
    b = _Builder()
    for _ in range(2 * n + 1 + p):
        b.node()
    path_edges = [b.edge(k, k + 1, 1) for k in range(n)]
    v = [n + j for j in range(1, n + 1)]
    for vj in v:
        b.edge(n, vj, 1)
    x = [2 * n + i for i in range(1, p + 1)]
    for i, xi in enumerate(x, start=1):
        b.edge(xi, i - 1, 2 * (n - i) + 1)
    core: list[int] = []
    wit: dict[int, FaultSet] = {}
    for i, xi in enumerate(x, start=1):
        for vj in v:
            e = b.edge(xi, vj, 1)
            core.append(e)
            wit[e] = FaultSet.edges({path_edges[i - 1]}, budget=1)
    g = Graph(b.n, b.edges, weighted=True)
    params = {"n_param": n, "p": p, "x_nodes": x, "v_nodes": v, "path_edges": path_edges}
    return LbInstance("w1ft-pairs", g, [(0, vj) for vj in v], core, wit, 1, 1, params, [0], v)


def gen_dw1ft(
    inner: Graph,
    inner_pairs: Sequence[tuple[int, int]],
    n_pairs: int | None = None,
) -> LbInstance:
    """Directed weighted one-fault gadget around an inner graph ``K``.

    ``K`` keeps its node ids; the spine ``s, a_1, b_1, ..., a_n, b_n, t``
    follows.  Spokes ``a_i -> x_i`` weigh ``(n - i) W`` and ``y_i -> b_i``
    weigh ``i W`` with ``W = max(1, M) * max(n, |V(K)|)`` for ``M`` the largest
    weight of ``K``, so ``W`` exceeds every simple path in ``K``.  The core
    edges are the ``K`` edges lying on every shortest path of some pair.

    Raises:
        ValueError: if ``K`` is not directed, a pair is invalid or unreachable.
    """
    if not inner.directed:
        raise ValueError("inner graph must be directed")
    pairs = [(int(a), int(c)) for a, c in inner_pairs]
    n = len(pairs) if n_pairs is None else int(n_pairs)
    if n != len(pairs) or n < 1:
        raise ValueError("n_pairs must equal the number of inner pairs (>= 1)")
    k = inner.n
    inner_dist = {}
    for a, c in pairs:
        if not (0 <= a < k and 0 <= c < k):
            raise ValueError(f"inner pair ({a}, {c}) out of range")
        d = _spt(inner, a, False).dist[c]
        if d == INF:
            raise ValueError(f"inner pair ({a}, {c}) is unreachable in K")
        inner_dist[(a, c)] = d
    W = max(1, inner.max_weight()) * max(n, k)
    b = _Builder()
    for _ in range(k):
        b.node()
    for u2, v2, w2, _ in inner.edges():
        b.edge(u2, v2, w2)
    s = b.node()
    a_nodes, b_nodes, spine_faults = [], [], []
    prev = s
    for _ in range(n):
        ai, bi = b.node(), b.node()
        b.edge(prev, ai, 0)
        spine_faults.append(b.edge(ai, bi, 0))
        a_nodes.append(ai)
        b_nodes.append(bi)
        prev = bi
    t = b.node()
    b.edge(prev, t, 0)
    for i, (xi, yi) in enumerate(pairs, start=1):
        b.edge(a_nodes[i - 1], xi, (n - i) * W)
        b.edge(yi, b_nodes[i - 1], i * W)
    g = Graph(b.n, b.edges, directed=True, weighted=True)

    core: list[int] = []
    wit: dict[int, FaultSet] = {}
    for e in range(inner.m):
        for i, (a, c) in enumerate(pairs):
            if _spt(inner, a, False, {e}).dist[c] > inner_dist[(a, c)]:
                core.append(e)
                wit[e] = FaultSet.edges({spine_faults[i]}, budget=1)
                break
    inner_paths = [list(canonical_path(inner, a, c).edges) for a, c in pairs]
    params = {
        "n_pairs": n,
        "W": W,
        "inner_nodes": k,
        "inner_pairs": [list(p) for p in pairs],
        "spine_faults": spine_faults,
        "inner_canonical_paths": inner_paths,
        "inner_distances": [inner_dist[p] for p in pairs],
    }
    return LbInstance("dw1ft", g, [(s, t)], core, wit, 1, 1, params, [s], [t])
