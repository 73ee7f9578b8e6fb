"""Effective resistance and the metric-scaling experiments.

R(x, y) is the reciprocal of the minimal energy separating x and y.  For a
compatible conductance sequence it does not depend on the level at which it
is evaluated (the traced forms agree), so all tables here are computed once
in the finest level's network via a grounded inverse of the Laplacian.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import lattice
from .conductance import STANDARD, TWISTED, conductance_sequence
from .graphform import SingularInterior, _interior_factor, build_graph, assemble_energy

LOG3_LOG2 = math.log(3) / math.log(2)


def effective_resistance(f, x, y):
    """R(x, y) by a single grounded linear solve (ground at y)."""
    if x == y:
        raise ValueError("need two distinct vertices")
    n = f.dim
    keep = [i for i in range(n) if i != y]
    pos = keep.index(x)
    lu = _interior_factor(f.L[keep, :][:, keep])
    e = np.zeros(n - 1)
    e[pos] = 1.0
    return float(lu.solve(e)[pos])


class ResistanceComputer:
    """All-pairs effective resistances of one form, via a dense grounded inverse.

    Cheap at desk scale (the level-6 gasket has 1095 vertices) and turns every
    subsequent query into an array lookup.
    """

    def __init__(self, f):
        n = f.dim
        L = f.L.toarray()
        keep = list(range(1, n))
        try:
            G = np.linalg.inv(L[np.ix_(keep, keep)])
        except np.linalg.LinAlgError as e:
            raise SingularInterior(str(e)) from None
        Gfull = np.zeros((n, n))
        Gfull[np.ix_(keep, keep)] = G
        d = np.diag(Gfull).copy()
        self.matrix = d[:, None] + d[None, :] - 2 * Gfull

    def pair(self, x, y):
        return float(self.matrix[x, y])


@dataclass
class ResistanceTable:
    """Adjacent-pair resistances per dyadic scale, with slope and bracket fits."""

    variant: str
    level: int
    rows: list  # (scale, label, id_x, id_y, distance, resistance)
    slope: float
    strong_bracket: tuple  # (min, max) of R * 2^scale over label-1 rows
    weak_bracket: tuple  # same over label-2/3 rows
    lower_bound_constants: list  # per level n: min over all pairs in V_n of R/|x-y|

    def csv_text(self):
        lines = ["scale,label,id_x,id_y,distance,resistance"]
        for s, lab, i, j, dist, r in self.rows:
            lines.append(f"{s},{lab},{i},{j},{dist:.17g},{r:.17g}")
        return "\n".join(lines) + "\n"

    def json_summary(self):
        return {
            "variant": self.variant,
            "level": self.level,
            "pairs": len(self.rows),
            "slope": self.slope,
            "strong_bracket": list(self.strong_bracket),
            "weak_bracket": list(self.weak_bracket),
            "lower_bound_constants": self.lower_bound_constants,
        }


def _fit_slope(xs, ys):
    xs = np.log(np.asarray(xs))
    ys = np.log(np.asarray(ys))
    A = np.stack([xs, np.ones_like(xs)], axis=1)
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(coef[0])


def _adjacent_pairs(maps, scale, index, per_scale=64):
    """Edges of the scale-`scale` graph as id pairs in a finer index, by label."""
    strong, weak = [], []
    for _word, (q1, q2, q3) in lattice.iter_cells(maps, scale):
        g1, g2, g3 = index.id_of(q1), index.id_of(q2), index.id_of(q3)
        strong.append(tuple(sorted((g2, g3))) + (1,))
        weak.append(tuple(sorted((g1, g3))) + (2,))
        weak.append(tuple(sorted((g1, g2))) + (3,))
    strong = sorted(set(strong))[:per_scale]
    weak = sorted(set(weak))[:per_scale]
    return strong, weak


def resistance_scaling(variant, a0, b0, n_max, per_scale=64):
    """Tabulate R over adjacent pairs at every dyadic scale <= n_max.

    Strong (label-1) pairs carry the large conductance in the asymmetric case;
    the slope is fitted over all tabulated pairs on log R vs log distance.
    """
    maps = lattice.standard_ifs() if variant == STANDARD else lattice.twisted_ifs()
    rep = conductance_sequence(a0, b0, b0, n_max, variant)
    if rep.classification == "incompatible":
        raise ValueError("initial data admits no compatible sequence")
    g = build_graph(maps, n_max)
    f = assemble_energy(g, rep.conductances[n_max])
    rc = ResistanceComputer(f)
    pts = g.vertex_index.points

    rows = []
    level_ids = []
    for scale in range(n_max + 1):
        seen = set()
        for _word, corners in lattice.iter_cells(maps, scale):
            seen.update(g.vertex_index.id_of(q) for q in corners)
        level_ids.append(sorted(seen))
        strong, weak = _adjacent_pairs(maps, scale, g.vertex_index, per_scale)
        for i, j, label in strong + weak:
            xi, yi = pts[i].xy(), pts[j].xy()
            dist = math.hypot(xi[0] - yi[0], xi[1] - yi[1])
            rows.append((scale, label, i, j, dist, rc.pair(i, j)))

    # min of R/|x-y| over every distinct pair in V_n, per level
    lower = []
    for ids in level_ids:
        xy = np.array([pts[i].xy() for i in ids])
        diff = xy[:, None, :] - xy[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        sub = rc.matrix[np.ix_(ids, ids)]
        iu = np.triu_indices(len(ids), k=1)
        lower.append(float(np.min(sub[iu] / dist[iu])))

    slope = _fit_slope([r[4] for r in rows], [r[5] for r in rows])
    strong_scaled = [r[5] * 2.0 ** r[0] for r in rows if r[1] == 1]
    weak_scaled = [r[5] * 2.0 ** r[0] for r in rows if r[1] != 1]
    return ResistanceTable(
        variant=variant,
        level=n_max,
        rows=rows,
        slope=slope,
        strong_bracket=(min(strong_scaled), max(strong_scaled)),
        weak_bracket=(min(weak_scaled), max(weak_scaled)),
        lower_bound_constants=lower,
    )


@dataclass
class DiameterReport:
    """Partial sums of the inverse strong conductances and their geometric bound."""

    partial_sums: list
    tail_ratios: list  # b_{k-1} / b_k for k >= 1
    max_tail_ratio: float
    geometric_bound: float  # (15/2) / b0, from ratio <= 13/15

    def limit_estimate(self):
        return self.partial_sums[-1]


def diameter_bound(a0, b0, n_max):
    """Sum b_k^{-1} along the standard asymmetric sequence; the chain-path bound.

    Restricted to asymmetric data: for symmetric data the same sum converges
    for a different reason (b_k grows at the symmetric rate) and the bound
    below would not be the meaningful one.
    """
    if not a0 > b0 > 0:
        raise ValueError("need asymmetric data a0 > b0 > 0")
    rep = conductance_sequence(a0, b0, b0, n_max, STANDARD)
    bs = [t.b for t in rep.conductances]
    sums = []
    acc = 0.0
    for b in bs:
        acc += 1.0 / b
        sums.append(acc)
    ratios = [bs[k - 1] / bs[k] for k in range(1, len(bs))]
    return DiameterReport(
        partial_sums=sums,
        tail_ratios=ratios,
        max_tail_ratio=max(ratios),
        geometric_bound=7.5 / b0,
    )


@dataclass
class CutPointSet:
    """Cut points of the twisted gasket at one level, with their flanking cells.

    Every length-n word maps p1 somewhere; apart from p1 itself each image is
    hit by exactly two words, and those two cells flank the cut point.  The
    complement of the cut points in V_n is the U-side.
    """

    level: int
    words_by_point: dict  # LatticePoint -> list of words (length-n)
    cut_ids: list  # sorted ids in the ambient index
    u_ids: list

    def count(self):
        return len(self.words_by_point)


def cut_point_set(n, index):
    """Build the level-n cut-point set inside a level-m index (m >= n)."""
    maps = lattice.twisted_ifs()
    words_by_point = {}
    for word, corners in lattice.iter_cells(maps, n):
        q = corners[0]
        words_by_point.setdefault(q, []).append(word)
    cut_ids = sorted(index.id_of(q) for q in words_by_point)
    cut_set = set(cut_ids)
    u_ids = [i for i in range(len(index)) if i not in cut_set]
    return CutPointSet(n, words_by_point, cut_ids, u_ids)


@dataclass
class TwistedTopologyReport:
    """Resistance structure of the twisted gasket's cut points and U-side."""

    level: int
    boundary_resistance: float  # R(p2, p3)
    min_cut_resistance: dict  # cut level -> min pairwise R
    min_u_to_cut: float
    flanking: list  # (n, min over 4 pairings, max over 4 pairings)
    generation_table: list  # (birth level k, R across q, R * 3^k)
    u_slope: float
    u_slope_target: float = field(default=LOG3_LOG2)

    def json_dict(self):
        return {
            "level": self.level,
            "boundary_resistance": self.boundary_resistance,
            "min_cut_resistance": {str(k): v for k, v in self.min_cut_resistance.items()},
            "min_u_to_cut": self.min_u_to_cut,
            "flanking": [list(row) for row in self.flanking],
            "generation_table": [list(row) for row in self.generation_table],
            "u_slope": self.u_slope,
            "u_slope_target": self.u_slope_target,
        }


def twisted_topology_probe(a0, b0, n_max, cut_levels=(3, 4, 5, 6)):
    """Probe the twisted resistance metric: cut-point floor, flanking, U-slope.

    Computes (i) the minimum pairwise resistance among cut points per level,
    (ii) the minimum resistance from the U-side to any cut point, (iii) the
    resistance across each cut point between its two flanking cells, against
    3^-birthlevel, and (iv) the within-cell log-log slope on the U-side.
    """
    if not a0 > b0 > 0:
        raise ValueError("need asymmetric data a0 > b0 > 0")
    maps = lattice.twisted_ifs()
    rep = conductance_sequence(a0, b0, b0, n_max, TWISTED)
    g = build_graph(maps, n_max)
    index = g.vertex_index
    f = assemble_energy(g, rep.conductances[n_max])
    R = ResistanceComputer(f).matrix

    p2 = index.id_of(lattice.corner_point(2, n_max))
    p3 = index.id_of(lattice.corner_point(3, n_max))
    r_boundary = float(R[p2, p3])

    min_cut = {}
    for k in cut_levels:
        if k > n_max:
            continue
        cps = cut_point_set(k, index)
        ids = cps.cut_ids
        sub = R[np.ix_(ids, ids)]
        min_cut[k] = float(np.min(sub[np.triu_indices(len(ids), k=1)]))

    cps = cut_point_set(n_max, index)
    min_u_to_cut = float(np.min(R[np.ix_(cps.u_ids, cps.cut_ids)]))

    # flanking vertices of the midpoint of p2p3 at each level: the cut point is
    # the p1-corner of the cells 2 1^(n-1) and 3 1^(n-1); its neighbors in each
    # cell are that cell's other two corners
    flanking = []
    for n in range(1, n_max + 1):
        side2 = [index.id_of(lattice.apply_word(maps, (2,) + (1,) * (n - 1), c)) for c in (2, 3)]
        side3 = [index.id_of(lattice.apply_word(maps, (3,) + (1,) * (n - 1), c)) for c in (2, 3)]
        vals = [float(R[i, j]) for i in side2 for j in side3]
        flanking.append((n, min(vals), max(vals)))

    # every cut point, against 3^-(birth level)
    generation = []
    born_before = {lattice.corner_point(1, 0)}
    for k in range(1, n_max + 1):
        cps_k = cut_point_set(k, index)
        for q, words in sorted(cps_k.words_by_point.items(), key=lambda kv: index.id_of(kv[0])):
            if q in born_before:
                continue
            w_a, w_b = words[0], words[1]
            tail = (1,) * (n_max - k)
            va = index.id_of(lattice.apply_word(maps, w_a + tail, 2))
            vb = index.id_of(lattice.apply_word(maps, w_b + tail, 2))
            r = float(R[va, vb])
            generation.append((k, r, r * 3.0 ** k))
        born_before |= set(cps_k.words_by_point)

    # U-side dyadic ladder inside the cell at p2 (p2 is its fixed point)
    dists, rs = [], []
    for k in range(1, n_max + 1):
        v = index.id_of(lattice.apply_word(maps, (2,) * k, 3))
        dists.append(0.5 ** k)
        rs.append(float(R[p2, v]))
    u_slope = _fit_slope(dists, rs)

    return TwistedTopologyReport(
        level=n_max,
        boundary_resistance=r_boundary,
        min_cut_resistance=min_cut,
        min_u_to_cut=min_u_to_cut,
        flanking=flanking,
        generation_table=generation,
        u_slope=u_slope,
    )
