"""
Sourcewise preservers, round by round
=====================================

Build a 2-fault-tolerant preserver for two sources on a random graph, look
at what each round of one target collected, and confirm the result by
exhaustive checking.
"""

from faultspan import BuildParams, FaultMode, build_sourcewise_preserver, verify_preserver
from faultspan.randgraph import gnm_graph
from faultspan.sourcewise import compute_target_edges

g = gnm_graph(60, 240, seed=1)
sources = [0, 1]
params = BuildParams(f=2, mode=FaultMode.EDGE, seed=7)

###############################################################################
# One target at a time. ``S_i`` is the set of roots of round ``i``; each round
# keeps the last edge of every canonical root-to-target path, then moves on to
# nearby tree nodes plus a random sample.

te = compute_target_edges(g, sources, 17, params, keep_states=True)
for r in te.rounds:
    print(f"round {r.i}: |S_i|={r.S_i_size:3d}  d_i={r.d_i}  new edges at t={r.edges_added}"
          f"  |S_short|={r.S_short_size}  |S_long|={r.S_long_size}")
print("edges kept for target 17:", sorted(te.edges))

###############################################################################
# The whole preserver is the union over all targets.

pre = build_sourcewise_preserver(g, sources, params, threads=4)
print(f"{len(pre)} of {g.m} edges kept")

###############################################################################
# Check every fault set of size <= 2 against the host.

pairs = [(s, v) for s in sources for v in range(g.n)]
verdict = verify_preserver(g, pre, pairs, f=2)
print(verdict.status, "after", verdict.checked_fault_sets, "fault sets")
