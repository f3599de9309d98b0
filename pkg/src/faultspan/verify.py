"""Exhaustive verification of fault-tolerant preservers and spanners.

``verify_preserver`` walks every fault set of size ``0..f`` in lexicographic
order over sorted ids and compares distances in the host and in the
candidate subgraph for every demand pair.  A distance is only recomputed
when the fault set hits one of the shortest paths already known for a
subset of it; otherwise the subset's distance is reused, which is exact
because deleting elements off a shortest path cannot change its length.
Requests whose enumeration exceeds the budget are refused, never sampled.
"""
from __future__ import annotations

import itertools
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from faultspan.graph import INF, FaultMode, FaultSet, Graph, _spt

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "CoreReport",
    "Verdict",
    "certify_core",
    "distance_by_relaxation",
    "edge_necessity",
    "enumeration_size",
    "verify_preserver",
]

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


def _jsonable_length(x):
    return None if x == INF else x


@dataclass(frozen=True)
class Verdict:
    ok: bool
    checked_fault_sets: int
    faults: FaultSet | None = None
    pair: tuple[int, int] | None = None
    dist_h: object = None
    dist_g: object = None
    beta: object = 0

    @property
    def status(self) -> str:
        return "OK" if self.ok else "COUNTEREXAMPLE"

    def to_dict(self) -> dict:
        doc: dict = {"status": self.status, "checked_fault_sets": self.checked_fault_sets, "beta": self.beta}
        if not self.ok:
            doc.update(
                faults={"mode": self.faults.mode.value, "members": sorted(self.faults.members)},
                pair=list(self.pair),
                dist_in_H=_jsonable_length(self.dist_h),
                dist_in_G=_jsonable_length(self.dist_g),
            )
        return doc


def enumeration_size(universe: int, f: int) -> int:
    return sum(math.comb(universe, k) for k in range(min(f, universe) + 1))


def _subset_ids(g: Graph, h) -> frozenset[int]:
    if isinstance(h, Graph):
        if h.n != g.n or h.directed != g.directed:
            raise ValueError("subgraph and host differ in node count or directedness")
        ids = set()
        for u, v, w, _ in h.edges():
            k = g.edge_id(u, v)
            if k is None or (g.weighted and g.weight(k) != w):
                raise ValueError(f"subgraph edge ({u}, {v}) is not a host edge")
            ids.add(k)
        return frozenset(ids)
    ids = frozenset(getattr(h, "edge_ids", h))
    bad = sorted(k for k in ids if not 0 <= k < g.m)
    if bad or (hasattr(h, "host") and h.host is not g and h.host != g):
        raise ValueError("subgraph is not contained in the host graph")
    return ids


class _DistanceCache:
    """Per-source distances in one (sub)graph, memoised over fault subsets."""

    def __init__(self, g: Graph, alive: Sequence[bool] | None, mode: FaultMode, targets: dict[int, list[int]], f: int):
        self.g = g
        self.alive = alive
        self.mode = mode
        self.targets = targets
        self.f = f
        self.memo: dict[tuple[int, tuple[int, ...]], tuple[dict, frozenset]] = {}

    def _compute(self, s: int, faults: tuple[int, ...]):
        fs = frozenset(faults)
        if self.mode is FaultMode.EDGE:
            tree = _spt(self.g, s, False, fs, (), self.alive)
        else:
            tree = _spt(self.g, s, False, (), fs, self.alive)
        dists = {}
        used: set[int] = set()
        for t in self.targets[s]:
            if self.mode is FaultMode.VERTEX and (t in fs or s in fs):
                dists[t] = INF
                continue
            dists[t] = tree.dist[t]
            v = t
            if self.mode is FaultMode.VERTEX:
                used.add(t)
            while tree.dist[v] != INF and v != s:
                if self.mode is FaultMode.EDGE:
                    used.add(tree.parent_edge[v])
                v = tree.parent[v]
                if self.mode is FaultMode.VERTEX:
                    used.add(v)
        if self.mode is FaultMode.VERTEX:
            used.add(s)
        return dists, frozenset(used)

    def get(self, s: int, faults: tuple[int, ...]) -> dict:
        key = (s, faults)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        result = None
        for drop in range(len(faults)):
            sub = faults[:drop] + faults[drop + 1 :]
            cached = self.memo.get((s, sub))
            if cached is not None and faults[drop] not in cached[1]:
                result = cached
                break
        if result is None:
            result = self._compute(s, faults)
        if len(faults) < self.f:
            self.memo[key] = result
        return result[0]


def verify_preserver(
    g: Graph,
    h,
    pairs: Iterable[tuple[int, int]],
    f: int,
    beta=0,
    mode: FaultMode | str = FaultMode.EDGE,
    *,
    budget: int = DEFAULT_BUDGET,
) -> Verdict:
    """Check ``dist_{h-F}(s,t) <= dist_{g-F}(s,t) + beta`` for all pairs and all ``|F| <= f``.

    ``h`` may be a :class:`~faultspan.sourcewise.Preserver`, a subgraph
    :class:`Graph` on the same node ids, or an iterable of host edge ids.
    Unreachable in both counts as satisfied.  Returns the first failure in
    enumeration order (fault-set size, then lexicographic ids, then pair
    order).

    Raises:
        ValueError: if ``h`` is not a subgraph of ``g``.
        BudgetExceeded: if the enumeration would exceed ``budget`` distance
            computations.
    """
    mode = FaultMode.parse(mode)
    h_ids = _subset_ids(g, h)
    pairs = [(int(a), int(b)) for a, b in pairs]
    universe = g.m if mode is FaultMode.EDGE else g.n
    total = enumeration_size(universe, f) * len(pairs)
    if total > budget:
        raise BudgetExceeded(f"{total} distance computations exceed budget {budget}")
    targets: dict[int, list[int]] = {}
    for a, b in pairs:
        targets.setdefault(a, [])
        if b not in targets[a]:
            targets[a].append(b)
    alive_h = [k in h_ids for k in range(g.m)]
    cache_g = _DistanceCache(g, None, mode, targets, f)
    cache_h = _DistanceCache(g, alive_h, mode, targets, f)
    checked = 0
    ids = range(universe)
    for k in range(min(f, universe) + 1):
        for faults in itertools.combinations(ids, k):
            checked += 1
            per_source: dict[int, tuple[dict, dict]] = {}
            for a, b in pairs:
                if a not in per_source:
                    per_source[a] = (cache_g.get(a, faults), cache_h.get(a, faults))
                dg, dh = per_source[a][0][b], per_source[a][1][b]
                if dh > dg + beta:
                    return Verdict(False, checked, FaultSet(mode, frozenset(faults)), (a, b), dh, dg, beta)
    return Verdict(True, checked, beta=beta)


def _dist_pair(g: Graph, s: int, t: int, faults: FaultSet, extra_edge: int | None):
    be = set(faults.members) if faults.mode is FaultMode.EDGE else set()
    bn = faults.members if faults.mode is FaultMode.VERTEX else frozenset()
    if s in bn or t in bn:
        return INF
    if extra_edge is not None:
        be.add(extra_edge)
    return _spt(g, s, False, be, bn).dist[t]


def _witnesses(g: Graph, pairs, faults: FaultSet, e: int, beta) -> bool:
    for s, t in pairs:
        with_e = _dist_pair(g, s, t, faults, None)
        without = _dist_pair(g, s, t, faults, e)
        if without > with_e + beta:
            return True
    return False


def edge_necessity(
    g: Graph,
    pairs: Iterable[tuple[int, int]],
    f: int,
    beta,
    e: int,
    mode: FaultMode | str = FaultMode.EDGE,
    witness_hint: FaultSet | None = None,
    *,
    search: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> FaultSet | None:
    """Find faults ``F`` (``|F| <= f``) under which dropping edge ``e`` costs more than ``beta``.

    The hint is tried first; without a working hint every fault set is
    searched in lexicographic order (unless ``search`` is false).  Returns the
    witness or ``None``.
    """
    mode = FaultMode.parse(mode)
    pairs = [(int(a), int(b)) for a, b in pairs]
    if not 0 <= e < g.m:
        raise ValueError(f"unknown edge id {e}")
    if witness_hint is not None:
        witness_hint.validate(g)
        if witness_hint.mode is not mode:
            raise ValueError("witness hint has the wrong fault mode")
        if len(witness_hint) <= f and _witnesses(g, pairs, witness_hint, e, beta):
            return witness_hint
    if not search:
        return None
    universe = [k for k in range(g.m) if k != e] if mode is FaultMode.EDGE else list(range(g.n))
    total = enumeration_size(len(universe), f) * len(pairs)
    if total > budget:
        raise BudgetExceeded(f"{total} distance computations exceed budget {budget}")
    for k in range(min(f, len(universe)) + 1):
        for faults in itertools.combinations(universe, k):
            fs = FaultSet(mode, frozenset(faults))
            if _witnesses(g, pairs, fs, e, beta):
                return fs
    return None


@dataclass
class CoreReport:
    family: str
    results: dict[int, bool] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def certified(self) -> int:
        return sum(self.results.values())

    @property
    def ok(self) -> bool:
        return self.certified == self.total

    def failed(self) -> list[int]:
        return sorted(e for e, good in self.results.items() if not good)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "core_size": self.total,
            "certified": self.certified,
            "status": "CERTIFIED" if self.ok else "UNCERTIFIED",
            "failed_edges": self.failed(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def certify_core(inst) -> CoreReport:
    """Check every core edge of a lower-bound instance against its witness faults.

    An edge counts as certified when its witness raises some demand-pair
    distance by at least the instance margin once the edge is removed.  Edges
    without a witness fail.
    """
    report = CoreReport(inst.family)
    beta = inst.margin - 1
    for e in inst.core_edges:
        hint = inst.witnesses.get(e)
        if hint is None:
            report.results[e] = False
            continue
        got = edge_necessity(inst.graph, inst.pairs, inst.budget, beta, e, hint.mode, hint, search=False)
        report.results[e] = got is not None
    return report


def distance_by_relaxation(g: Graph, s: int, t: int, faults: FaultSet | None = None):
    """Independent distance oracle: plain Bellman-Ford style repeated relaxation.

    Shares no code with the BFS/Dijkstra kernel; meant for cross-checking
    on small graphs.
    """
    dead_e = faults.members if faults is not None and faults.mode is FaultMode.EDGE else frozenset()
    dead_v = faults.members if faults is not None and faults.mode is FaultMode.VERTEX else frozenset()
    if s in dead_v or t in dead_v:
        return INF
    arcs = []
    for u, v, w, k in g.edges():
        if k in dead_e or u in dead_v or v in dead_v:
            continue
        arcs.append((u, v, w))
        if not g.directed:
            arcs.append((v, u, w))
    dist = [INF] * g.n
    dist[s] = 0
    for _ in range(max(g.n - 1, 0)):
        changed = False
        for u, v, w in arcs:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    return dist[t]
