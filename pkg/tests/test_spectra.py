import numpy as np
import pytest

from gasketforms import lattice
from gasketforms.conductance import STANDARD, TWISTED, ConductanceTriple, conductance_sequence
from gasketforms.graphform import assemble_energy, build_graph
from gasketforms.spectra import (
    DimensionGuard,
    InsufficientData,
    counting_function,
    decimation_check,
    discrete_measure,
    full_spectrum,
    lambda1_scaling,
    level_spectrum,
    scaling_linearity,
    spectral_exponent,
    weyl_gap_check,
)

STD = lattice.standard_ifs()
TW = lattice.twisted_ifs()


def test_measure_counts_are_exact():
    for n in (0, 1, 2, 3):
        g = build_graph(STD, n)
        m = discrete_measure(g)
        assert m.total() == 3 ** (n + 1)
        assert m.weights.sum() == pytest.approx(1.0, abs=1e-14)
        # corners sit in one cell, junctions in two
        counts = sorted(set(m.counts.tolist()))
        assert counts == ([1] if n == 0 else [1, 2])
        for k in (1, 2, 3):
            assert m.counts[g.vertex_index.id_of(lattice.corner_point(k, n))] == 1


def test_neumann_kernel_is_constants():
    g = build_graph(TW, 2)
    f = assemble_energy(g, ConductanceTriple(2, 1, 1))
    m = discrete_measure(g)
    eigs = full_spectrum(f, m)
    assert abs(eigs[0]) < 1e-9
    assert eigs[1] > 1e-3


def test_dirichlet_spectrum_positive_and_interlaced():
    g = build_graph(STD, 3)
    rep = conductance_sequence(4, 1, 1, 3, STANDARD)
    f = assemble_energy(g, rep.conductances[3])
    m = discrete_measure(g)
    bd = [g.vertex_index.id_of(lattice.corner_point(k, 3)) for k in (1, 2, 3)]
    neu = full_spectrum(f, m)
    dir_ = full_spectrum(f, m, "dirichlet", bd)
    assert dir_[0] > 0
    assert len(dir_) == len(neu) - 3
    tol = 1e-9 * neu[-1]
    for k in range(len(dir_)):
        assert neu[k] <= dir_[k] + tol
        assert dir_[k] <= neu[k + 3] + tol


def test_counting_function_counts_ties():
    eigs = [1.0, 2.0, 2.0, 3.0]
    assert counting_function(eigs, 0.5) == 0
    assert counting_function(eigs, 2.0) == 3
    assert counting_function(eigs, 10.0) == 4


def test_weyl_gap_brackets():
    lo, hi, probes = weyl_gap_check(STANDARD, 4, 1, 1, 3)
    assert lo == 0 and hi == 3
    assert probes > 10


@pytest.mark.parametrize("variant", (STANDARD, TWISTED))
def test_decimation_identity(variant):
    assert decimation_check(variant, 4, 1, 1, 3) < 1e-9
    assert decimation_check(variant, 1, 1, 1, 3) < 1e-9


def test_decimation_dimensions():
    # deleting the six level-1 vertices from level 4 leaves 117 = 3 * 39
    g = build_graph(STD, 4)
    v1 = set()
    for _w, corners in lattice.iter_cells(STD, 1):
        v1.update(corners)
    assert len(g) - len(v1) == 117
    assert 3 * ((3**4 + 3) // 2 - 3) == 117


def test_spectral_exponent_fit_window():
    eigs = level_spectrum(STANDARD, 4, 1, 1, 5, "dirichlet")
    fit = spectral_exponent(eigs)
    assert fit.window[0] >= 16
    assert fit.eigenvalues_used >= 50
    assert 0.5 < fit.slope < 1.0


def test_spectral_exponent_needs_data():
    with pytest.raises(InsufficientData):
        spectral_exponent(np.linspace(1.0, 2.0, 40))


def test_dimension_guard():
    with pytest.raises(DimensionGuard):
        level_spectrum(STANDARD, 2, 1, 1, 8, "dirichlet")


def test_lambda1_sweep_scales_linearly_in_b0():
    sw = lambda1_scaling(STANDARD, 3)
    assert len(sw.rows) == 8
    by_ratio = {}
    for a0, b0, lam, scaled in sw.rows:
        by_ratio.setdefault(round(a0 / b0, 9), []).append(scaled)
    # for fixed a0/b0 the scaled eigenvalue is a single number (exact for
    # power-of-two b0)
    for vals in by_ratio.values():
        assert max(vals) - min(vals) < 1e-9
    assert sw.ratio < 10


def test_scaling_linearity_is_exact_for_powers_of_two():
    assert scaling_linearity(STANDARD, 3, 1, 1, 3, s=2.0) == 0.0
    assert scaling_linearity(TWISTED, 2, 1, 1, 3, s=4.0) == 0.0


def test_eigenvalues_increase_with_conductance():
    lo = level_spectrum(STANDARD, 2, 1, 1, 2, "dirichlet")
    hi = level_spectrum(STANDARD, 2 * 1.7, 1.7, 1.7, 2, "dirichlet")
    assert np.all(hi >= lo - 1e-12)
