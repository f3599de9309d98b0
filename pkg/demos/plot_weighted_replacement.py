"""
Replacement paths in weighted graphs
====================================

A single weighted pair needs only the two shortest-path trees plus one
"swap" edge per edge of the shortest path.  Then a two-fault gadget shows
why no such trick survives two faults: its distances reveal every core edge.
"""

from faultspan import build_1ft_st_undirected, canonical_path, find_swap_edge, verify_preserver
from faultspan.lowerbounds import gen_w2ft, w2ft_reconstruct_core
from faultspan.randgraph import gnm_graph

g = gnm_graph(80, 240, weights=(1, 20), seed=3)
s, t = 0, 79
pi = canonical_path(g, s, t)
print("shortest path:", pi.nodes, "length", pi.length)

###############################################################################
# Swap edges along the path.

for e in pi.edges[:4]:
    sw = find_swap_edge(g, s, t, e)
    if sw is not None:
        print(f"fault {g.endpoints(e)} -> swap edge {sw.edge} ({sw.x}, {sw.y}), detour length {sw.replacement.length}")

pre = build_1ft_st_undirected(g, s, t)
print(f"{len(pre)} edges (bound {3 * g.n - 3});", verify_preserver(g, pre, [(s, t)], 1).status)

###############################################################################
# The two-fault gadget with a few core edges missing: faulted distance
# queries alone recover exactly which ones are present.

missing = [(0, 1), (2, 3), (4, 4)]
inst = gen_w2ft(5, drop_core=missing)
found = w2ft_reconstruct_core(inst)
print("recovered", len(found), "edges; missing ones:", sorted({(i, j) for i in range(5) for j in range(5)} - found))
