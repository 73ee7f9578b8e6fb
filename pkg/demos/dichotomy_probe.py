"""Which initial conductance data admit a compatible refinement sequence?

Symmetric data and one-strong-two-equal-weak data refine forever; everything
else hits a level where no positive solution exists.  The probe below runs
the refinement on a few initial Y-triples and reports what happened.
"""

from gasketforms.conductance import STANDARD, YTriple, refine_sequence

cases = [
    (1.0, 1.0, 1.0),
    (2.0, 1.0, 1.0),
    (10.0, 1.0, 1.0),
    (3.0, 2.0, 1.0),
    (2.0, 2.0, 1.0),
    (1.0, 0.999, 0.998),
]

print(f"{'initial (x,y,z)':>22} {'outcome':>30}")
for x, y, z in cases:
    ys, failing = refine_sequence(YTriple(x, y, z), 50, STANDARD)
    if failing is None:
        last = ys[-1]
        out = f"50 positive levels, x_50 = {last.x:.3e}"
    else:
        out = f"no positive solution at level {failing}"
    print(f"{str((x, y, z)):>22} {out:>38}")
