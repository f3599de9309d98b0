"""
Certifying lower-bound cores
============================

Every lower-bound instance carries a list of core edges and, for each one, a
small set of faults under which that edge cannot be dropped.  Here we build
the two-tree instance, check its core, and watch one witness in action.
"""

from faultspan import certify_core, gen_sh, gen_th_tree
from faultspan.graph import _spt

###############################################################################
# The recursive tree: under the faults of leaf ``j`` that leaf becomes the
# clear winner among all leaves.

tree = gen_th_tree(2, 3)
print(f"{tree.graph.n} nodes, height {tree.height}, {len(tree.leaves)} leaves")
dist = _spt(tree.graph, tree.root, False, tree.fault_sets[4]).dist
print("leaf distances under F_4:", [dist[x] for x in tree.leaves])

###############################################################################
# Two trees with all leaf-to-leaf edges in between.

inst = gen_sh(1, 3)
report = certify_core(inst)
print(report.to_dict())

###############################################################################
# One witness, by hand: removing its core edge costs at least 2.

e = inst.core_edges[4]
faults = set(inst.witnesses[e].members)
s, t = inst.pairs[0]
with_edge = _spt(inst.graph, s, False, faults).dist[t]
without = _spt(inst.graph, s, False, faults | {e}).dist[t]
print(f"edge {e}: {with_edge} with it, {without} without it")
