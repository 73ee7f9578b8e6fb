"""Eigenvalue counting on the gasket: exponents, boundary gap, decimation.

The counting function rho(t) of the measure-weighted Laplacian grows like
t^gamma with gamma depending on the conductance class.  Alongside the fits:
the Neumann-Dirichlet counting gap stays pinned in {0,..,3}, and deleting the
six level-1 vertices splits the operator into three rescaled copies of the
shifted system - the decimation that drives the whole spectral analysis.
"""

from gasketforms.conductance import STANDARD
from gasketforms.spectra import (
    decimation_check,
    lambda1_scaling,
    level_spectrum,
    spectral_exponent,
    weyl_gap_check,
)

for a0, label, ref in ((4.0, "one strong direction (4,1,1)", 0.7305), (1.0, "symmetric (1,1,1)", 0.6826)):
    eigs = level_spectrum(STANDARD, a0, 1, 1, 6, "dirichlet")
    fit = spectral_exponent(eigs)
    print(f"{label}: {len(eigs)} Dirichlet eigenvalues at level 6")
    print(
        f"  slope of log rho vs log lambda over window {fit.window}: "
        f"{fit.slope:.4f} (reference {ref})"
    )

print("\nNeumann-Dirichlet counting gap, exact integer check:")
for n in (3, 4, 5, 6):
    lo, hi, probes = weyl_gap_check(STANDARD, 4, 1, 1, n)
    print(f"  level {n}: gap range [{lo}, {hi}] over {probes} probe points")

print("\ndecimation identity, max multiset deviation:")
for n in (3, 4):
    dev = decimation_check(STANDARD, 4, 1, 1, n)
    print(f"  level {n} vs three rescaled level-{n - 1} copies: {dev:.3e}")

sw = lambda1_scaling(STANDARD, 5)
print("\nsmallest Dirichlet eigenvalue across the (a0, b0) grid, scaled by b0:")
for a0, b0, lam, scaled in sw.rows:
    print(f"  a0={a0:<5g} b0={b0:<4g} lambda1={lam:>10.4f}  lambda1/b0={scaled:.4f}")
print(f"  max/min of lambda1/b0: {sw.ratio:.4f}")
