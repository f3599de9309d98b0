"""Single-fault preservers for one weighted ``s``-``t`` pair.

Undirected graphs: the two canonical shortest-path trees of ``s`` and ``t``
plus one swap edge per edge of ``pi(s, t)`` give at most ``3n - 3`` edges.
Directed graphs: ``pi(s, t)`` plus a pairwise preserver (here a union of
canonical paths) for the endpoints of each replacement path's detour in
``G - E(pi(s, t))``.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from faultspan.graph import INF, Graph, Path, Preserver, _spt, canonical_path, canonical_spt

__all__ = [
    "SwapEdge",
    "build_1ft_st_directed",
    "build_1ft_st_undirected",
    "detour_segments",
    "find_swap_edge",
    "pairwise_preserver",
    "replacement_path",
]


@dataclass(frozen=True)
class SwapEdge:
    """The one edge of a replacement path not covered by the two trees.

    ``edge`` is ``None`` when no patch is needed (``x == t``).
    """

    x: int
    y: int | None
    edge: int | None
    fault: int
    replacement: Path


def replacement_path(g: Graph, s: int, t: int, e: int) -> Path | None:
    """Canonical shortest ``s``-``t`` path in ``g`` without edge ``e``."""
    return _spt(g, s, False, {e}).path_to(t)


class _Dists:
    """Lazily computed single-source distance tables."""

    def __init__(self, g: Graph):
        self.g = g
        self._cache: dict[int, tuple] = {}

    def __call__(self, root: int) -> tuple:
        if root not in self._cache:
            self._cache[root] = _spt(self.g, root, False).dist
        return self._cache[root]


def _some_shortest_uses(dist, root: int, u: int, v: int, w, z: int) -> bool:
    """Does some shortest ``root``-``z`` path traverse edge ``{u, v}``?"""
    dr = dist(root)
    if dr[z] == INF:
        return False
    return dr[u] + w + dist(v)[z] == dr[z] or dr[v] + w + dist(u)[z] == dr[z]


def find_swap_edge(g: Graph, s: int, t: int, e: int, *, _dist: _Dists | None = None) -> SwapEdge | None:
    """Swap edge ``(x, y)`` on the canonical replacement path around fault ``e``.

    ``x`` is the last node of the replacement path that has no shortest path
    from ``s`` through ``e``; ``y`` follows it.  Returns ``None`` when ``e``
    disconnects ``s`` from ``t``.

    Raises:
        ValueError: if ``g`` is directed or ``e`` is not on ``pi(s, t)``.
    """
    if g.directed:
        raise ValueError("swap edges are defined for undirected graphs")
    pi = canonical_path(g, s, t)
    if pi is None or e not in pi.edges:
        raise ValueError(f"edge {e} is not on the canonical {s}-{t} path")
    rep = replacement_path(g, s, t, e)
    if rep is None:
        return None
    dist = _dist or _Dists(g)
    u, v, w = g.edge(e)
    x_pos = 0
    for pos, z in enumerate(rep.nodes):
        if not _some_shortest_uses(dist, s, u, v, w, z):
            x_pos = pos
    x = rep.nodes[x_pos]
    if x == t:
        return SwapEdge(x, None, None, e, rep)
    return SwapEdge(x, rep.nodes[x_pos + 1], rep.edges[x_pos], e, rep)


def build_1ft_st_undirected(g: Graph, s: int, t: int) -> Preserver:
    """Single-edge-fault ``(s, t)`` preserver of an undirected (weighted) graph.

    If a swap edge ever fails the tree-coverage conditions (possible only
    with zero-weight ties), the whole replacement path is added instead and
    counted in ``stats["fallback_faults"]``.
    """
    if g.directed:
        raise ValueError("use build_1ft_st_directed for directed graphs")
    tree_s = canonical_spt(g, s)
    tree_t = canonical_spt(g, t)
    edges = tree_s.tree_edges() | tree_t.tree_edges()
    pi = tree_s.path_to(t)
    patched = skipped = fallback = 0
    swaps: list[SwapEdge] = []
    dist = _Dists(g)
    for e in pi.edges if pi is not None else ():
        sw = find_swap_edge(g, s, t, e, _dist=dist)
        if sw is None:
            skipped += 1
            continue
        swaps.append(sw)
        if sw.edge is None:
            continue
        u, v, w = g.edge(e)
        covered = not _some_shortest_uses(dist, s, u, v, w, sw.x) and not _some_shortest_uses(dist, t, u, v, w, sw.y)
        if covered:
            edges.add(sw.edge)
            patched += 1
        else:
            edges |= set(sw.replacement.edges)
            fallback += 1
    stats = {
        "n": g.n,
        "m": g.m,
        "s": s,
        "t": t,
        "preserver_edges": len(edges),
        "patched_faults": patched,
        "skipped_disconnecting_faults": skipped,
        "fallback_faults": fallback,
    }
    return Preserver(g, frozenset(edges), stats, extras={"swaps": swaps})


def pairwise_preserver(
    g: Graph, pairs: Iterable[tuple[int, int]], *, banned_edges: Iterable[int] = ()
) -> frozenset[int]:
    """Union of canonical paths for every pair; unreachable pairs add nothing."""
    banned = frozenset(banned_edges)
    by_source: dict[int, list[int]] = {}
    for a, b in pairs:
        by_source.setdefault(int(a), []).append(int(b))
    edges: set[int] = set()
    for a in sorted(by_source):
        tree = _spt(g, a, False, banned)
        for b in by_source[a]:
            p = tree.path_to(b)
            if p is not None:
                edges.update(p.edges)
    return frozenset(edges)


def detour_segments(path: Path, on_pi: set[int]) -> list[tuple[int, int]]:
    """``(start, end)`` index ranges of maximal runs of edges off ``pi``."""
    runs = []
    start = None
    for i, k in enumerate(path.edges):
        if k not in on_pi:
            if start is None:
                start = i
        elif start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(path.edges)))
    return runs


def build_1ft_st_directed(g: Graph, s: int, t: int) -> Preserver:
    """Single-edge-fault ``(s, t)`` preserver via a pairwise preserver in ``G - E(pi)``.

    A replacement path whose off-``pi`` part is not one contiguous run is
    added whole and counted in ``stats["noncontiguous_detours"]``.
    """
    pi = canonical_path(g, s, t)
    if pi is None:
        stats = {"n": g.n, "m": g.m, "s": s, "t": t, "preserver_edges": 0, "patched_faults": 0,
                 "skipped_disconnecting_faults": 0, "noncontiguous_detours": 0, "pairs": 0}
        return Preserver(g, frozenset(), stats)
    on_pi = set(pi.edges)
    pairs: list[tuple[int, int]] = []
    extra: set[int] = set()
    skipped = noncontig = 0
    for e in pi.edges:
        rep = replacement_path(g, s, t, e)
        if rep is None:
            skipped += 1
            continue
        runs = detour_segments(rep, on_pi)
        if len(runs) == 1:
            a, b = runs[0]
            pairs.append((rep.nodes[a], rep.nodes[b]))
        else:
            noncontig += 1
            extra.update(rep.edges)
    edges = set(pi.edges) | extra | pairwise_preserver(g, pairs, banned_edges=on_pi)
    stats = {
        "n": g.n,
        "m": g.m,
        "s": s,
        "t": t,
        "preserver_edges": len(edges),
        "patched_faults": len(pairs),
        "skipped_disconnecting_faults": skipped,
        "noncontiguous_detours": noncontig,
        "pairs": len(set(pairs)),
    }
    return Preserver(g, frozenset(edges), stats)
