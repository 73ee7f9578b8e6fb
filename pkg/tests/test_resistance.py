import math

import numpy as np
import pytest

from gasketforms import lattice
from gasketforms.conductance import STANDARD, TWISTED, ConductanceTriple, conductance_sequence
from gasketforms.graphform import assemble_energy, build_graph, trace_to_subset
from gasketforms.resistance import (
    ResistanceComputer,
    cut_point_set,
    diameter_bound,
    effective_resistance,
    resistance_scaling,
    twisted_topology_probe,
)

STD = lattice.standard_ifs()
TW = lattice.twisted_ifs()


def unit_form(n, ifs=STD, triple=(1, 1, 1)):
    g = build_graph(ifs, n)
    return g, assemble_energy(g, ConductanceTriple(*triple))


def test_series_parallel_example():
    g, f = unit_form(0, triple=(2, 1, 1))
    i2 = g.vertex_index.id_of(lattice.corner_point(2))
    i3 = g.vertex_index.id_of(lattice.corner_point(3))
    assert effective_resistance(f, i2, i3) == pytest.approx(0.4, abs=1e-13)


def test_solve_and_trace_paths_agree():
    g, f = unit_form(2, TW, (2.3, 0.9, 0.9))
    idx = g.vertex_index
    x = idx.id_of(lattice.corner_point(1, 2))
    y = idx.id_of(lattice.apply_word(TW, (2,), 3))
    r_solve = effective_resistance(f, x, y)
    traced = trace_to_subset(f, [x, y])
    g_xy = -traced.L.toarray()[0, 1]
    assert r_solve == pytest.approx(1.0 / g_xy, rel=1e-10)


def test_dense_computer_matches_single_solves():
    g, f = unit_form(2, STD, (2, 1, 1))
    rc = ResistanceComputer(f)
    rng = np.random.default_rng(2)
    n = f.dim
    for _ in range(10):
        x, y = rng.choice(n, size=2, replace=False)
        assert rc.pair(x, y) == pytest.approx(effective_resistance(f, x, y), rel=1e-9)
    assert np.allclose(rc.matrix, rc.matrix.T)
    assert np.allclose(np.diag(rc.matrix), 0.0)


def test_resistance_is_a_metric():
    """Symmetry, positivity, and the triangle inequality on random triples."""
    g, f = unit_form(3, TW, (3, 1, 1))
    rc = ResistanceComputer(f)
    rng = np.random.default_rng(0)
    n = f.dim
    for _ in range(200):
        x, y, z = rng.choice(n, size=3, replace=False)
        rxy, ryz, rxz = rc.pair(x, y), rc.pair(y, z), rc.pair(x, z)
        assert rxy > 0
        assert rxz <= rxy + ryz + 1e-12


def test_resistance_level_invariance():
    """Compatibility makes R between fixed vertices independent of the level."""
    rep = conductance_sequence(2, 1, 1, 4, STANDARD)
    vals = []
    for n in range(5):
        g = build_graph(STD, n)
        f = assemble_energy(g, rep.conductances[n])
        i1 = g.vertex_index.id_of(lattice.corner_point(1, n))
        i2 = g.vertex_index.id_of(lattice.corner_point(2, n))
        vals.append(effective_resistance(f, i1, i2))
    assert max(vals) - min(vals) < 1e-11


def test_rayleigh_monotonicity():
    # raising every conductance can only lower resistances
    g, f_lo = unit_form(2, STD, (2, 1, 1))
    f_hi = assemble_energy(g, ConductanceTriple(2.5, 1.2, 1.1))
    lo, hi = ResistanceComputer(f_lo).matrix, ResistanceComputer(f_hi).matrix
    iu = np.triu_indices(f_lo.dim, k=1)
    assert np.all(hi[iu] <= lo[iu] + 1e-12)


def test_scaling_table_shape_and_brackets():
    t = resistance_scaling(STANDARD, 2, 1, 4)
    scales = {r[0] for r in t.rows}
    assert scales == set(range(5))
    for s in scales:
        strong = [r for r in t.rows if r[0] == s and r[1] == 1]
        assert 0 < len(strong) <= 64
    lo, hi = t.strong_bracket
    assert 0 < lo <= hi
    assert all(c > 0 for c in t.lower_bound_constants)
    # distances halve with the scale
    for s in scales:
        dists = {round(r[4], 12) for r in t.rows if r[0] == s}
        assert dists == {round(0.5**s, 12)}


def test_scaling_rejects_incompatible_data():
    # two equal strong directions and one weak obstruct within a few levels
    with pytest.raises(ValueError):
        resistance_scaling(STANDARD, 1, 2, 5)


def test_symmetric_slope_value():
    t = resistance_scaling(STANDARD, 1, 1, 5)
    assert abs(t.slope - math.log(5 / 3) / math.log(2)) < 0.05


def test_diameter_report():
    d = diameter_bound(2, 1, 10)
    assert all(s2 > s1 for s1, s2 in zip(d.partial_sums, d.partial_sums[1:]))
    assert d.max_tail_ratio <= 13 / 15
    assert d.partial_sums[-1] < d.geometric_bound
    with pytest.raises(ValueError):
        diameter_bound(1, 1, 5)


def test_cut_point_counts_and_nesting():
    g = build_graph(TW, 5)
    idx = g.vertex_index
    prev = None
    for n in (1, 2, 3, 4):
        c = cut_point_set(n, idx)
        assert c.count() == (3**n + 1) // 2
        pts = set(c.words_by_point)
        if prev is not None:
            assert prev <= pts
        prev = pts
        # every cut point except the base corner comes from exactly two words
        base = lattice.corner_point(1, 0)
        for q, words in c.words_by_point.items():
            assert len(words) == (1 if q == base else 2)
        assert sorted(c.cut_ids + c.u_ids) == list(range(len(idx)))


def test_topology_probe_reports():
    r = twisted_topology_probe(2, 1, 4, cut_levels=(3, 4))
    assert r.boundary_resistance == pytest.approx(0.4, abs=1e-9)
    assert set(r.min_cut_resistance) == {3, 4}
    # nested cut sets can only lower the min pairwise resistance
    assert r.min_cut_resistance[4] <= r.min_cut_resistance[3] + 1e-12
    assert r.min_cut_resistance[4] > 0
    assert r.min_u_to_cut > 0
    lo = r.boundary_resistance / 3
    for _n, rmin, rmax in r.flanking:
        assert lo - 1e-9 <= rmin <= rmax <= r.boundary_resistance + 1e-9
    # generation rows cover every cut point other than the base corner
    assert len(r.generation_table) == (3**4 + 1) // 2 - 1
    scaled = [row[2] for row in r.generation_table]
    assert max(scaled) / min(scaled) < 2.0
    assert r.u_slope == pytest.approx(r.u_slope_target, abs=0.2)


def test_probe_rejects_symmetric_data():
    with pytest.raises(ValueError):
        twisted_topology_probe(1, 1, 3)
