"""Refinement ratio limits for one strong and two equal weak conductances.

The standard gasket's refinement drives the strong conductance up by a factor
approaching 2 per level and the weak ones by 3/2; the twisted maps push the
same initial data toward factors 3 and 1 instead.  Run it and watch the
columns converge.
"""

from gasketforms.conductance import STANDARD, TWISTED, conductance_sequence

for variant in (STANDARD, TWISTED):
    rep = conductance_sequence(2, 1, 1, 30, variant)
    cs = rep.conductances
    print(f"\n{variant} refinement of (a,b,c) = (2,1,1):")
    print(f"{'level':>5} {'a_k':>14} {'b_k':>14} {'a ratio':>10} {'b ratio':>10}")
    for k in (1, 2, 5, 10, 15, 20, 25, 30):
        ra = cs[k].a / cs[k - 1].a
        rb = cs[k].b / cs[k - 1].b
        print(f"{k:>5} {cs[k].a:>14.6g} {cs[k].b:>14.6g} {ra:>10.6f} {rb:>10.6f}")
