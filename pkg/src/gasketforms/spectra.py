"""Graph Laplacian spectra and eigenvalue-counting asymptotics.

The level-n operator is the energy form's Laplacian weighted by the natural
cell-counting measure: each vertex carries (number of incident cells)/3^{n+1},
so corners weigh 1/3^{n+1} and junction vertices twice that.  All spectra come
from a dense symmetric eigensolve of M^{-1/2} L M^{-1/2}.
"""

import bisect
import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .conductance import STANDARD, conductance_sequence
from .graphform import build_graph, assemble_energy

DIMENSION_GUARD = 4000


class DimensionGuard(Exception):
    """Eigenproblem dimension above the desk-scale cutoff."""


class InsufficientData(Exception):
    """Too few eigenvalues in the requested fit window."""


@dataclass
class DiscreteMeasure:
    """Vertex weights counts/3^(level+1), kept as exact integer counts."""

    level: int
    counts: np.ndarray  # integer cell-incidence count per vertex id

    @property
    def weights(self):
        return self.counts / 3.0 ** (self.level + 1)

    def total(self):
        # integer identity: counts sum to 3 * 3^level corners, i.e. weights sum to 1
        return int(self.counts.sum())


def discrete_measure(g):
    counts = np.zeros(len(g.vertex_index), dtype=np.int64)
    for u, v, _word, _label in g.edges:
        # each cell contributes its three corners once; count via its three edges,
        # each corner sitting on exactly two of them
        counts[u] += 1
        counts[v] += 1
    counts //= 2
    m = DiscreteMeasure(g.level, counts)
    assert m.total() == 3 ** (g.level + 1)
    return m


def assemble_operator(f, m, bc="neumann", boundary_ids=()):
    """Symmetrized operator M^{-1/2} L M^{-1/2}, optionally Dirichlet-restricted.

    Returns (dense matrix, kept ids).  Dirichlet deletes the rows/columns of
    `boundary_ids`; eigenvalues are those of M^{-1}L on the restricted space.
    """
    n = f.dim
    if n > DIMENSION_GUARD:
        raise DimensionGuard(f"dimension {n} exceeds {DIMENSION_GUARD}")
    w = m.weights
    L = f.L.toarray()
    if bc == "dirichlet":
        keep = [i for i in range(n) if i not in set(boundary_ids)]
    elif bc == "neumann":
        keep = list(range(n))
    else:
        raise ValueError(f"unknown boundary condition {bc!r}")
    A = L[np.ix_(keep, keep)]
    s = 1.0 / np.sqrt(w[keep])
    return (A * s[None, :]) * s[:, None], keep


def full_spectrum(f, m, bc="neumann", boundary_ids=()):
    """All eigenvalues of the measure-weighted Laplacian, ascending."""
    A, _keep = assemble_operator(f, m, bc, boundary_ids)
    return np.linalg.eigvalsh(A)


def counting_function(eigs, t):
    """rho(t): number of eigenvalues <= t (ties counted in)."""
    return bisect.bisect_right(list(eigs), t)


@dataclass
class ExponentFit:
    """Log-log fit of the counting function over a mid-spectrum window."""

    slope: float
    window: tuple  # (first index, last index), 0-based into the sorted spectrum
    eigenvalues_used: int
    residual_rms: float


def spectral_exponent(eigs, lo_frac=0.01, hi_frac=0.40):
    """Fit log rho(lambda_k) against log lambda_k over indices in the window.

    The window starts at max(16, lo_frac * count) to skip the lattice's
    smallest eigenvalues and stops at hi_frac * count, well before the
    discreteness-dominated top of the spectrum.
    """
    eigs = np.sort(np.asarray(eigs))
    n = len(eigs)
    lo = max(16, int(lo_frac * n))
    hi = int(hi_frac * n)
    if hi - lo < 50:
        raise InsufficientData(f"window [{lo}, {hi}) holds fewer than 50 eigenvalues")
    ks = np.arange(lo, hi)
    lam = eigs[ks]
    # rho at lambda_k counts ties, so recompute rather than assuming k+1
    rho = np.searchsorted(eigs, lam, side="right")
    x = np.log(lam)
    y = np.log(rho)
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return ExponentFit(
        slope=float(coef[0]),
        window=(lo, hi - 1),
        eigenvalues_used=hi - lo,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def _level_spectrum(variant, a0, b0, c0, n, bc):
    maps = lattice.standard_ifs() if variant == STANDARD else lattice.twisted_ifs()
    rep = conductance_sequence(a0, b0, c0, n, variant)
    if rep.classification == "incompatible":
        raise ValueError("initial data admits no compatible sequence")
    g = build_graph(maps, n)
    f = assemble_energy(g, rep.conductances[n])
    m = discrete_measure(g)
    bd = [g.vertex_index.id_of(lattice.corner_point(k, n)) for k in (1, 2, 3)]
    return full_spectrum(f, m, bc, bd if bc == "dirichlet" else ()), g, f, m, rep


def level_spectrum(variant, a0, b0, c0, n, bc="neumann"):
    """Spectrum of the level-n operator for the given initial conductances."""
    eigs, *_ = _level_spectrum(variant, a0, b0, c0, n, bc)
    return eigs


def weyl_gap_check(variant, a0, b0, c0, n):
    """Exact integer check of 0 <= rho_N(t) - rho_D(t) <= 3 for all t.

    Interlacing of the Dirichlet spectrum (3 constraints removed) between
    Neumann eigenvalues makes the difference a step function with values in
    {0,..,3}; checking at midpoints between consecutive distinct merged
    eigenvalues covers every step.
    """
    neu, g, f, m, _rep = _level_spectrum(variant, a0, b0, c0, n, "neumann")
    bd = [g.vertex_index.id_of(lattice.corner_point(k, n)) for k in (1, 2, 3)]
    dir_ = full_spectrum(f, m, "dirichlet", bd)
    merged = np.sort(np.concatenate([neu, dir_]))
    # collapse near-coincident values so a midpoint never lands inside a cluster
    tol = 1e-9 * max(1.0, float(merged[-1]))
    probes = [merged[0] - 1.0]
    for a, b in zip(merged[:-1], merged[1:]):
        if b - a > tol:
            probes.append(0.5 * (a + b))
    probes.append(merged[-1] + 1.0)
    diffs = []
    for t in probes:
        diffs.append(counting_function(neu, t) - counting_function(dir_, t))
    return min(diffs), max(diffs), len(probes)


def decimation_check(variant, a0, b0, c0, n):
    """Compare the level-n Dirichlet-on-V1 spectrum with 3x the shifted system.

    Deleting all six level-1 vertices from the level-n operator decouples it
    into the three level-(n-1) Dirichlet copies built from the once-refined
    conductances; eigenvalues match after the factor-3 measure rescaling.
    Returns the max absolute discrepancy between the sorted multisets.
    """
    maps = lattice.standard_ifs() if variant == STANDARD else lattice.twisted_ifs()
    rep = conductance_sequence(a0, b0, c0, n, variant)
    g = build_graph(maps, n)
    f = assemble_energy(g, rep.conductances[n])
    m = discrete_measure(g)
    v1_ids = []
    for _word, corners in lattice.iter_cells(maps, 1):
        v1_ids.extend(g.vertex_index.id_of(q) for q in corners)
    v1_ids = sorted(set(v1_ids))
    big = full_spectrum(f, m, "dirichlet", v1_ids)

    g_small = build_graph(maps, n - 1)
    f_small = assemble_energy(g_small, rep.conductances[n])
    m_small = discrete_measure(g_small)
    bd = [g_small.vertex_index.id_of(lattice.corner_point(k, n - 1)) for k in (1, 2, 3)]
    small = full_spectrum(f_small, m_small, "dirichlet", bd)

    stacked = np.sort(np.concatenate([3.0 * small] * 3))
    if len(stacked) != len(big):
        raise AssertionError(f"multiset sizes differ: {len(big)} vs {len(stacked)}")
    return float(np.max(np.abs(np.sort(big) - stacked)))


@dataclass
class Lambda1Sweep:
    rows: list  # (a0, b0, lambda1, lambda1 / b0)
    ratio: float  # max/min of lambda1 / b0

    def csv_text(self):
        lines = ["a0,b0,lambda1,lambda1_over_b0"]
        for a0, b0, lam, sc in self.rows:
            lines.append(f"{a0:.17g},{b0:.17g},{lam:.17g},{sc:.17g}")
        return "\n".join(lines) + "\n"


def lambda1_scaling(variant, n, b0s=(0.5, 1.0, 2.0, 4.0), ratios=(2.0, 8.0)):
    """Smallest Dirichlet eigenvalue across a grid of initial data, scaled by b0."""
    rows = []
    for b0 in b0s:
        for q in ratios:
            eigs = level_spectrum(variant, q * b0, b0, b0, n, "dirichlet")
            lam1 = float(eigs[0])
            rows.append((q * b0, b0, lam1, lam1 / b0))
    scaled = [r[3] for r in rows]
    return Lambda1Sweep(rows=rows, ratio=max(scaled) / min(scaled))


def scaling_linearity(variant, a0, b0, c0, n, s=2.0):
    """Max relative eigenvalue discrepancy between scaled data and scaled spectrum.

    Multiplying every initial conductance by s multiplies the whole spectrum
    by s; with s a power of two the comparison is exact in floating point.
    """
    base = level_spectrum(variant, a0, b0, c0, n, "dirichlet")
    scld = level_spectrum(variant, s * a0, s * b0, s * c0, n, "dirichlet")
    denom = np.maximum(np.abs(s * base), 1e-300)
    return float(np.max(np.abs(scld - s * base) / denom))
