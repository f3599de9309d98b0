"""+2-additive fault-tolerant spanners for undirected unweighted graphs.

The spanner keeps every edge touching a low-degree vertex (degree below
``L``) and adds a vertex-fault-tolerant sourcewise preserver rooted at a
random sample of about ``n/L * f ln n`` vertices.  Correctness needs each
high-degree vertex to see at least ``f + 1`` sampled neighbours; the sample
is redrawn until that holds.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from faultspan.graph import FaultMode, Graph, Preserver
from faultspan.sourcewise import BuildParams, build_sourcewise_preserver, log_factor

__all__ = ["SpannerConfig", "build_additive_spanner", "degree_threshold", "split_by_degree"]

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 32


@dataclass(frozen=True)
class SpannerConfig:
    f: int
    degree_threshold_override: int | None = None
    sample_constant: Fraction | int | float = 3
    seed: int = 0
    c_hit: Fraction | int | float = 3

    def __post_init__(self) -> None:
        if self.f < 0:
            raise ValueError("fault budget f must be >= 0")
        if self.sample_constant <= 0:
            raise ValueError("sample_constant must be positive")
        if self.degree_threshold_override is not None and self.degree_threshold_override < 1:
            raise ValueError("degree threshold must be >= 1")


def degree_threshold(n: int, f: int) -> int:
    """``ceil(f * n^(2^f / (2^f + 1)))``, clamped to at least 1."""
    if n == 0:
        return 1
    p = 2**f
    return max(1, math.ceil(f * n ** (p / (p + 1))))


def split_by_degree(g: Graph, L: int) -> tuple[frozenset[int], frozenset[int]]:
    """Partition the nodes into ``(degree < L, degree >= L)``."""
    if L < 1:
        raise ValueError("L must be >= 1")
    low = frozenset(v for v in range(g.n) if g.degree(v) < L)
    return low, frozenset(range(g.n)) - low


def _neighbours(g: Graph, v: int) -> set[int]:
    return {u for u, _, _ in g.out_arcs(v)}


def build_additive_spanner(g: Graph, cfg: SpannerConfig, *, threads: int = 1) -> Preserver:
    """Build a +2-additive spanner of ``g`` tolerating ``cfg.f`` vertex faults.

    Raises:
        ValueError: if ``g`` is directed or weighted, or if no sample can give
            every high-degree vertex ``f + 1`` sampled neighbours within
            ``MAX_ATTEMPTS`` draws.
    """
    if g.directed or g.weighted:
        raise ValueError("additive spanner requires an undirected unweighted graph")
    n = g.n
    L = cfg.degree_threshold_override or degree_threshold(n, cfg.f)
    low, high = split_by_degree(g, L)
    size = min(n, math.ceil(float(cfg.sample_constant) * (n / L) * log_factor(n, cfg.f))) if n else 0
    need = cfg.f + 1
    sample: list[int] = []
    attempts = 0
    for attempts in range(1, MAX_ATTEMPTS + 1):
        rng = np.random.default_rng([cfg.seed & ((1 << 64) - 1), attempts])
        sample = sorted(int(x) for x in rng.choice(n, size=size, replace=False)) if size else []
        chosen = set(sample)
        short = [v for v in sorted(high) if len(_neighbours(g, v) & chosen) < need]
        if not short:
            break
        log.info("sample attempt %d: %d high-degree vertices see fewer than %d sampled neighbours", attempts, len(short), need)
        if size == n:
            raise ValueError(f"high-degree vertex {short[0]} has fewer than f+1={need} neighbours")
    else:
        raise ValueError(f"no valid sample after {MAX_ATTEMPTS} attempts")

    edges: set[int] = set()
    for v in low:
        edges |= g.incident_edges(v)
    if sample:
        pre = build_sourcewise_preserver(
            g, sample, BuildParams(cfg.f, FaultMode.VERTEX, cfg.seed, cfg.c_hit), threads=threads
        )
        edges |= pre.edge_ids
        per_target = pre.per_target
    else:
        per_target = []
    stats = {
        "n": n,
        "m": g.m,
        "f": cfg.f,
        "L": L,
        "sample_size": len(sample),
        "resample_attempts": attempts,
        "spanner_edges": len(edges),
    }
    return Preserver(g, frozenset(edges), stats, per_target)
