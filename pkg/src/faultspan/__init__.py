"""Fault-tolerant distance preservers, additive spanners and lower-bound instances."""
from faultspan.graph import (
    INF,
    Direction,
    FaultMode,
    FaultSet,
    Graph,
    GraphFormatError,
    Path,
    Preserver,
    ShortestPathTree,
    canonical_path,
    canonical_spt,
    distance_avoiding,
    format_graph,
    parse_graph,
    read_graph,
    write_graph,
)
from faultspan.lowerbounds import (
    LbInstance,
    ThTree,
    gen_dw1ft,
    gen_sh,
    gen_shq,
    gen_sxt,
    gen_th_tree,
    gen_w1ft_pairs,
    gen_w2ft,
)
from faultspan.sourcewise import BuildParams, build_sourcewise_preserver, compute_target_edges
from faultspan.spanner import SpannerConfig, build_additive_spanner
from faultspan.verify import (
    BudgetExceeded,
    Verdict,
    certify_core,
    edge_necessity,
    verify_preserver,
)
from faultspan.weighted import build_1ft_st_directed, build_1ft_st_undirected, find_swap_edge

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BudgetExceeded",
    "BuildParams",
    "Direction",
    "FaultMode",
    "FaultSet",
    "Graph",
    "GraphFormatError",
    "LbInstance",
    "Path",
    "Preserver",
    "ShortestPathTree",
    "SpannerConfig",
    "ThTree",
    "Verdict",
    "build_1ft_st_directed",
    "build_1ft_st_undirected",
    "build_additive_spanner",
    "build_sourcewise_preserver",
    "canonical_path",
    "canonical_spt",
    "certify_core",
    "compute_target_edges",
    "distance_avoiding",
    "edge_necessity",
    "find_swap_edge",
    "format_graph",
    "gen_dw1ft",
    "gen_sh",
    "gen_shq",
    "gen_sxt",
    "gen_th_tree",
    "gen_w1ft_pairs",
    "gen_w2ft",
    "parse_graph",
    "read_graph",
    "verify_preserver",
    "write_graph",
]
