"""Immutable graphs, canonical shortest paths and distances under faults.

Every construction in the package relies on a single deterministic
tie-breaking rule: when a node can be reached at the same distance through
several predecessors (nodes one step closer to the root), the predecessor
with the smallest node id wins.  BFS is used for unweighted graphs and
Dijkstra for weighted ones.  Weights are exact integers (or Fractions) and
``INF`` is only ever used as the "unreachable" sentinel, so every distance
comparison is exact.
"""
from __future__ import annotations

import enum
import heapq
import json
import math
from collections.abc import Collection, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path as FsPath
from typing import TextIO, Union

import numpy as np

__all__ = [
    "INF",
    "Direction",
    "FaultMode",
    "FaultSet",
    "Graph",
    "GraphFormatError",
    "Path",
    "Preserver",
    "ShortestPathTree",
    "canonical_path",
    "canonical_spt",
    "delete_edges",
    "distance_avoiding",
    "induce_without_vertices",
    "read_graph",
    "write_graph",
]

#: Length of a path that does not exist.  Compares greater than any finite
#: length and absorbs addition.
INF = math.inf

Weight = Union[int, Fraction]


class Direction(enum.Enum):
    FROM_ROOT = "from_root"
    INTO_ROOT = "into_root"


class FaultMode(enum.Enum):
    EDGE = "edge"
    VERTEX = "vertex"

    @classmethod
    def parse(cls, value: "FaultMode | str") -> "FaultMode":
        if isinstance(value, FaultMode):
            return value
        return cls(str(value).lower())


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


@dataclass(frozen=True)
class ArcArrays:
    """Directed view of a graph as numpy arrays.

    Undirected edges contribute two arcs that share an edge id.  ``in_ptr``
    and ``in_arc`` form a CSR index of arcs grouped by head node, with each
    group sorted by tail.
    """

    src: np.ndarray
    dst: np.ndarray
    eid: np.ndarray
    in_ptr: np.ndarray
    in_arc: np.ndarray


class Graph:
    """An immutable simple graph on nodes ``0..n-1``.

    Edges are ``(u, v, w)`` triples; edge ``k`` of the constructor argument
    gets id ``k``.  Unweighted graphs force every weight to 1.  Self-loops
    and parallel edges are rejected (for undirected graphs ``(u, v)`` and
    ``(v, u)`` are parallel).
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence] = (),
        *,
        directed: bool = False,
        weighted: bool = False,
    ) -> None:
        if n < 0:
            raise ValueError("node count must be nonnegative")
        self._n = int(n)
        self._directed = bool(directed)
        self._weighted = bool(weighted)
        tails: list[int] = []
        heads: list[int] = []
        weights: list[Weight] = []
        index: dict[tuple[int, int], int] = {}
        for k, edge in enumerate(edges):
            if len(edge) == 2:
                u, v = edge
                w: Weight = 1
            elif len(edge) == 3:
                u, v, w = edge
            else:
                raise ValueError(f"edge {k}: expected (u, v) or (u, v, w), got {edge!r}")
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {k}: endpoint out of range 0..{n - 1}: ({u}, {v})")
            if u == v:
                raise ValueError(f"edge {k}: self-loop at node {u}")
            if not weighted:
                w = 1
            elif isinstance(w, bool) or not isinstance(w, Rational):
                raise ValueError(f"edge {k}: weight must be an exact integer or Fraction, got {w!r}")
            elif w < 0:
                raise ValueError(f"edge {k}: negative weight {w}")
            elif isinstance(w, Fraction) and w.denominator == 1:
                w = int(w)
            key = (u, v) if directed or u < v else (v, u)
            if key in index:
                raise ValueError(f"edge {k}: parallel edge ({u}, {v})")
            index[key] = k
            tails.append(u)
            heads.append(v)
            weights.append(w)
        self._tails = tuple(tails)
        self._heads = tuple(heads)
        self._weights = tuple(weights)
        self._index = index
        out_adj: list[list[tuple[int, Weight, int]]] = [[] for _ in range(n)]
        in_adj: list[list[tuple[int, Weight, int]]] = [[] for _ in range(n)]
        for k, (u, v, w) in enumerate(zip(tails, heads, weights)):
            out_adj[u].append((v, w, k))
            in_adj[v].append((u, w, k))
            if not directed:
                out_adj[v].append((u, w, k))
                in_adj[u].append((v, w, k))
        for lst in out_adj:
            lst.sort()
        for lst in in_adj:
            lst.sort()
        self._out = tuple(tuple(a) for a in out_adj)
        self._in = tuple(tuple(a) for a in in_adj)
        self._arcs: ArcArrays | None = None

    # ---- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._tails)

    @property
    def directed(self) -> bool:
        return self._directed

    @property
    def weighted(self) -> bool:
        return self._weighted

    def edge(self, eid: int) -> tuple[int, int, Weight]:
        return self._tails[eid], self._heads[eid], self._weights[eid]

    def edges(self) -> list[tuple[int, int, Weight, int]]:
        """All edges as ``(u, v, w, id)`` in id order."""
        return [(u, v, w, k) for k, (u, v, w) in enumerate(zip(self._tails, self._heads, self._weights))]

    def weight(self, eid: int) -> Weight:
        return self._weights[eid]

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self._tails[eid], self._heads[eid]

    def edge_id(self, u: int, v: int) -> int | None:
        """Id of the edge joining ``u`` to ``v`` (either orientation if undirected)."""
        key = (u, v) if self._directed or u < v else (v, u)
        return self._index.get(key)

    def out_arcs(self, u: int) -> tuple[tuple[int, Weight, int], ...]:
        """``(head, weight, edge id)`` for every arc leaving ``u``, sorted by head."""
        return self._out[u]

    def in_arcs(self, v: int) -> tuple[tuple[int, Weight, int], ...]:
        """``(tail, weight, edge id)`` for every arc entering ``v``, sorted by tail."""
        return self._in[v]

    def degree(self, u: int) -> int:
        if self._directed:
            return len(self._out[u]) + len(self._in[u])
        return len(self._out[u])

    def incident_edges(self, u: int) -> set[int]:
        return {k for _, _, k in self._out[u]} | {k for _, _, k in self._in[u]}

    def max_weight(self) -> Weight:
        return max(self._weights, default=0)

    def reversed(self) -> "Graph":
        """Same graph with every arc flipped; edge ids are kept."""
        if not self._directed:
            return self
        return Graph(self._n, zip(self._heads, self._tails, self._weights), directed=True, weighted=self._weighted)

    def arcs(self) -> ArcArrays:
        if self._arcs is None:
            src = list(self._tails)
            dst = list(self._heads)
            eid = list(range(self.m))
            if not self._directed:
                src, dst = src + list(self._heads), dst + list(self._tails)
                eid = eid + eid
            src_a = np.asarray(src, dtype=np.int64)
            dst_a = np.asarray(dst, dtype=np.int64)
            order = np.lexsort((src_a, dst_a))
            counts = np.bincount(dst_a, minlength=self._n) if dst_a.size else np.zeros(self._n, dtype=np.int64)
            in_ptr = np.zeros(self._n + 1, dtype=np.int64)
            np.cumsum(counts, out=in_ptr[1:])
            self._arcs = ArcArrays(src_a, dst_a, np.asarray(eid, dtype=np.int64), in_ptr, order.astype(np.int64))
        return self._arcs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._n == other._n
            and self._directed == other._directed
            and self._weighted == other._weighted
            and self.edges() == other.edges()
        )

    def __hash__(self) -> int:
        return hash((self._n, self._directed, self._weighted, self._tails, self._heads, self._weights))

    def __repr__(self) -> str:
        kind = ("directed" if self._directed else "undirected") + (" weighted" if self._weighted else "")
        return f"Graph(n={self._n}, m={self.m}, {kind})"


@dataclass(frozen=True)
class Path:
    """A walk ``nodes[0] -> ... -> nodes[-1]`` along host edges ``edges``."""

    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    length: Weight

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def target(self) -> int:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def last_edge(self) -> int | None:
        return self.edges[-1] if self.edges else None


@dataclass(frozen=True)
class FaultSet:
    """Failed edges (``EDGE`` mode) or failed vertices (``VERTEX`` mode)."""

    mode: FaultMode
    members: frozenset[int] = frozenset()
    budget: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", FaultMode.parse(self.mode))
        object.__setattr__(self, "members", frozenset(int(x) for x in self.members))
        if self.budget is not None and len(self.members) > self.budget:
            raise ValueError(f"{len(self.members)} faults exceed budget {self.budget}")

    @classmethod
    def edges(cls, ids: Iterable[int] = (), budget: int | None = None) -> "FaultSet":
        return cls(FaultMode.EDGE, frozenset(ids), budget)

    @classmethod
    def vertices(cls, ids: Iterable[int] = (), budget: int | None = None) -> "FaultSet":
        return cls(FaultMode.VERTEX, frozenset(ids), budget)

    def validate(self, g: Graph) -> None:
        limit = g.m if self.mode is FaultMode.EDGE else g.n
        bad = sorted(x for x in self.members if not 0 <= x < limit)
        if bad:
            raise ValueError(f"invalid {self.mode.value} ids for {g!r}: {bad}")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


@dataclass(frozen=True)
class ShortestPathTree:
    """Parent pointers and distances of a canonical shortest-path tree.

    For ``FROM_ROOT`` trees ``parent[v]`` is the node before ``v`` on the
    canonical root-to-``v`` path; for ``INTO_ROOT`` trees it is the node after
    ``v`` on the canonical ``v``-to-root path.  ``parent_edge`` holds the id of
    the edge joining the two.  Unreachable nodes have distance ``INF`` and
    parent ``-1``.
    """

    root: int
    direction: Direction
    dist: tuple
    parent: tuple[int, ...]
    parent_edge: tuple[int, ...]
    order: tuple[int, ...] = field(repr=False, default=())

    def reachable(self, v: int) -> bool:
        return self.dist[v] != INF

    def path_to(self, v: int) -> Path | None:
        """Canonical tree path between the root and ``v``, oriented along the arcs."""
        if self.dist[v] == INF:
            return None
        nodes = [v]
        edges = []
        while nodes[-1] != self.root:
            edges.append(self.parent_edge[nodes[-1]])
            nodes.append(self.parent[nodes[-1]])
        if self.direction is Direction.FROM_ROOT:
            nodes.reverse()
            edges.reverse()
        return Path(tuple(nodes), tuple(edges), self.dist[v])

    def tree_edges(self) -> set[int]:
        return {e for e in self.parent_edge if e >= 0}


def _spt(
    g: Graph,
    root: int,
    reverse: bool,
    banned_edges: Collection[int] = (),
    banned_nodes: Collection[int] = (),
    edge_alive: Sequence[bool] | None = None,
) -> ShortestPathTree:
    n = g.n
    dist: list = [INF] * n
    parent = [-1] * n
    pedge = [-1] * n
    order: list[int] = []
    direction = Direction.INTO_ROOT if reverse else Direction.FROM_ROOT
    if root in banned_nodes:
        return ShortestPathTree(root, direction, tuple(dist), tuple(parent), tuple(pedge), ())
    adj = g._in if reverse else g._out
    dist[root] = 0

    def usable(k: int, v: int) -> bool:
        if k in banned_edges or v in banned_nodes:
            return False
        return edge_alive is None or edge_alive[k]

    if not g.weighted:
        frontier = [root]
        order.append(root)
        level = 0
        while frontier:
            level += 1
            nxt = []
            # frontier is sorted, so the first discoverer has the smallest id
            for u in frontier:
                for v, _, k in adj[u]:
                    if dist[v] == INF and usable(k, v):
                        dist[v] = level
                        parent[v] = u
                        pedge[v] = k
                        nxt.append(v)
            nxt.sort()
            order.extend(nxt)
            frontier = nxt
    else:
        heap = [(0, root)]
        done = [False] * n
        while heap:
            d, u = heapq.heappop(heap)
            if done[u] or d != dist[u]:
                continue
            done[u] = True
            order.append(u)
            for v, w, k in adj[u]:
                if done[v] or not usable(k, v):
                    continue
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = u
                    pedge[v] = k
                    heapq.heappush(heap, (nd, v))
                elif nd == dist[v] and u < parent[v]:
                    parent[v] = u
                    pedge[v] = k
    return ShortestPathTree(root, direction, tuple(dist), tuple(parent), tuple(pedge), tuple(order))


def canonical_spt(
    g: Graph,
    root: int,
    direction: Direction = Direction.FROM_ROOT,
    *,
    banned_edges: Collection[int] = (),
    banned_nodes: Collection[int] = (),
) -> ShortestPathTree:
    """Canonical shortest-path tree of ``g`` rooted at ``root``.

    Ties between equal-distance predecessors go to the smallest node id.
    With zero-weight edges only predecessors settled earlier by Dijkstra are
    candidates, which keeps the parent pointers acyclic.  ``INTO_ROOT`` on a
    directed graph runs over reversed arcs.  ``banned_edges`` and
    ``banned_nodes`` are treated as deleted.
    """
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range")
    return _spt(g, root, direction is Direction.INTO_ROOT, banned_edges, banned_nodes)


def canonical_path(g: Graph, s: int, t: int) -> Path | None:
    """The canonical shortest ``s``-``t`` path, or ``None`` if ``t`` is unreachable."""
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ValueError("node out of range")
    return canonical_spt(g, s).path_to(t)


def _fault_bans(faults: FaultSet | None) -> tuple[frozenset, frozenset]:
    if faults is None:
        return frozenset(), frozenset()
    if faults.mode is FaultMode.EDGE:
        return faults.members, frozenset()
    return frozenset(), faults.members


def distance_avoiding(g: Graph, s: int, t: int, faults: FaultSet | None = None):
    """Exact ``s``-``t`` distance in ``g`` with the faulty elements removed.

    In vertex mode a faulty endpoint makes the distance ``INF``.
    """
    if faults is not None:
        faults.validate(g)
    be, bn = _fault_bans(faults)
    if s in bn or t in bn:
        return INF
    return _spt(g, s, False, be, bn).dist[t]


def delete_edges(g: Graph, edge_ids: Iterable[int]) -> Graph:
    """Copy of ``g`` without the given edges.  Surviving edges are renumbered densely."""
    drop = set(edge_ids)
    bad = sorted(k for k in drop if not 0 <= k < g.m)
    if bad:
        raise ValueError(f"unknown edge ids {bad}")
    kept = [(u, v, w) for u, v, w, k in g.edges() if k not in drop]
    return Graph(g.n, kept, directed=g.directed, weighted=g.weighted)


def induce_without_vertices(g: Graph, node_ids: Iterable[int]) -> Graph:
    """Copy of ``g`` where the given nodes lose every incident edge (ids are kept)."""
    drop = set(node_ids)
    bad = sorted(v for v in drop if not 0 <= v < g.n)
    if bad:
        raise ValueError(f"unknown node ids {bad}")
    kept = [(u, v, w) for u, v, w, _ in g.edges() if u not in drop and v not in drop]
    return Graph(g.n, kept, directed=g.directed, weighted=g.weighted)


def subgraph(g: Graph, edge_ids: Iterable[int]) -> Graph:
    """The spanning subgraph of ``g`` keeping only ``edge_ids`` (in host id order)."""
    keep = set(edge_ids)
    return Graph(
        g.n,
        [(u, v, w) for u, v, w, k in g.edges() if k in keep],
        directed=g.directed,
        weighted=g.weighted,
    )


@dataclass
class Preserver:
    """An edge subset of ``host`` together with build metadata."""

    host: Graph
    edge_ids: frozenset[int]
    stats: dict = field(default_factory=dict)
    per_target: list = field(default_factory=list, repr=False)
    extras: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def graph(self) -> Graph:
        return subgraph(self.host, self.edge_ids)

    def metadata(self, include_rounds: bool = True) -> dict:
        doc = dict(self.stats)
        if include_rounds and self.per_target:
            doc["per_target"] = [
                {"t": te.t, "rounds": [r.summary() for r in te.rounds]} for te in self.per_target
            ]
        return doc

    def metadata_json(self, include_rounds: bool = True) -> str:
        return json.dumps(self.metadata(include_rounds), indent=2) + "\n"


# ---- text format ---------------------------------------------------------


def format_graph(g: Graph) -> str:
    lines = [
        f"graph {'directed' if g.directed else 'undirected'} "
        f"{'weighted' if g.weighted else 'unweighted'} {g.n} {g.m}"
    ]
    for u, v, w, _ in g.edges():
        lines.append(f"e {u} {v} {w}" if g.weighted else f"e {u} {v}")
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, dest: str | FsPath | TextIO) -> None:
    text = format_graph(g)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        FsPath(dest).write_text(text)


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 5 or parts[0] != "graph":
                raise GraphFormatError(f"line {lineno}: expected 'graph <directed|undirected> <weighted|unweighted> <n> <m>'")
            if parts[1] not in ("directed", "undirected") or parts[2] not in ("weighted", "unweighted"):
                raise GraphFormatError(f"line {lineno}: bad graph kind {parts[1]!r} {parts[2]!r}")
            try:
                n, m = int(parts[3]), int(parts[4])
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: bad counts") from exc
            header = (parts[1] == "directed", parts[2] == "weighted", n, m)
            continue
        weighted = header[1]
        if parts[0] != "e" or len(parts) != (4 if weighted else 3):
            raise GraphFormatError(f"line {lineno}: expected 'e <u> <v>{' <w>' if weighted else ''}'")
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: non-integer field") from exc
        edges.append(tuple(nums))
    if header is None:
        raise GraphFormatError("missing 'graph' header line")
    directed, weighted, n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges, directed=directed, weighted=weighted)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def read_graph(src: str | FsPath | TextIO) -> Graph:
    if hasattr(src, "read"):
        return parse_graph(src.read())
    return parse_graph(FsPath(src).read_text())
