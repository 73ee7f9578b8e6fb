"""Cut points of the twisted gasket and the two-sided structure they create.

Under the twisted maps every image of the base corner disconnects the
attractor.  In the resistance metric those cut points keep a positive
distance from one another (they form a uniformly discrete set), while on the
complement the metric scales like |x-y|^(log3/log2) - a genuinely different
local geometry on the two sides.
"""

import math

from gasketforms.resistance import twisted_topology_probe

r = twisted_topology_probe(2, 1, 6)

print(f"boundary resistance R(p2,p3) = {r.boundary_resistance:.6f}")
print("\nminimum pairwise resistance among cut points:")
for k in sorted(r.min_cut_resistance):
    print(f"  level {k}: {r.min_cut_resistance[k]:.6f}")
print("  (decreasing toward a positive floor, not to zero)")

print(f"\nminimum resistance from the complement to a cut point: {r.min_u_to_cut:.6f}")

print("\nresistance across the p2p3-midpoint between its flanking cells:")
for n, lo, hi in r.flanking:
    print(f"  level {n}: [{lo:.6f}, {hi:.6f}]")
print(
    f"  (all within [R(p2,p3)/3, R(p2,p3)] = "
    f"[{r.boundary_resistance / 3:.6f}, {r.boundary_resistance:.6f}])"
)

gens = {}
for k, _rr, rs in r.generation_table:
    gens.setdefault(k, []).append(rs)
print("\ncut points by birth level: resistance across them, scaled by 3^k:")
for k in sorted(gens):
    vals = gens[k]
    print(f"  level {k}: {len(vals):>3} points, R*3^k in [{min(vals):.4f}, {max(vals):.4f}]")

print(
    f"\nU-side slope of log R vs log |x-y|: {r.u_slope:.4f}"
    f"  (log 3/log 2 = {math.log(3) / math.log(2):.4f})"
)
