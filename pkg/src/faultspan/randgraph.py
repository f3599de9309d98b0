"""Seeded random graphs for tests, demos and benchmarks."""
from __future__ import annotations

import numpy as np

from faultspan.graph import Graph

__all__ = ["gnm_graph", "gnp_graph", "random_dag", "random_tree"]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _weights(rng, count: int, weights: tuple[int, int] | None) -> list[int]:
    if weights is None:
        return [1] * count
    lo, hi = weights
    return [int(w) for w in rng.integers(lo, hi + 1, size=count)]


def gnp_graph(n: int, p: float, *, directed: bool = False, weights: tuple[int, int] | None = None, seed=0) -> Graph:
    """Erdos-Renyi ``G(n, p)``; ``weights=(lo, hi)`` draws integer weights uniformly."""
    rng = _rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    keep = rng.random(len(pairs)) < p
    chosen = [pq for pq, k in zip(pairs, keep) if k]
    ws = _weights(rng, len(chosen), weights)
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)], directed=directed, weighted=weights is not None)


def gnm_graph(n: int, m: int, *, directed: bool = False, weights: tuple[int, int] | None = None, seed=0) -> Graph:
    """Uniform graph with exactly ``m`` distinct edges (sorted by endpoints)."""
    limit = n * (n - 1) if directed else n * (n - 1) // 2
    if not 0 <= m <= limit:
        raise ValueError(f"cannot place {m} edges on {n} nodes")
    rng = _rng(seed)
    found: set[tuple[int, int]] = set()
    while len(found) < m:
        batch = rng.integers(0, n, size=(2 * (m - len(found)) + 16, 2))
        for u, v in batch.tolist():
            if u == v:
                continue
            key = (u, v) if directed else (min(u, v), max(u, v))
            found.add(key)
            if len(found) == m:
                break
    chosen = sorted(found)
    ws = _weights(rng, m, weights)
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)], directed=directed, weighted=weights is not None)


def random_tree(n: int, *, weights: tuple[int, int] | None = None, seed=0) -> Graph:
    """Random recursive tree: node ``v`` attaches to a uniform earlier node."""
    rng = _rng(seed)
    parents = [int(rng.integers(0, v)) for v in range(1, n)]
    ws = _weights(rng, n - 1, weights)
    return Graph(n, [(p, v, w) for v, (p, w) in enumerate(zip(parents, ws), start=1)], weighted=weights is not None)


def random_dag(n: int, p: float, *, weights: tuple[int, int] | None = (0, 5), seed=0) -> Graph:
    """Directed acyclic ``G(n, p)`` with arcs from lower to higher ids."""
    rng = _rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < p
    chosen = [pq for pq, k in zip(pairs, keep) if k]
    ws = _weights(rng, len(chosen), weights)
    return Graph(n, [(u, v, w) for (u, v), w in zip(chosen, ws)], directed=True, weighted=weights is not None)
