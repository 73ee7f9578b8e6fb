"""Level-n energy forms: assembly, Schur-complement trace, harmonic extension.

The quadratic form E(u) = u^T L u is held as a sparse weighted graph
Laplacian.  Tracing to a vertex subset (eliminating the complement by a
Schur complement) realizes the restriction of the energy to coarser levels;
compatibility of a conductance sequence means this trace reproduces the
coarser form exactly.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import lattice


class SingularInterior(Exception):
    """Interior block failed to factor (disconnected or degenerate input)."""


class LevelGraph:
    """Vertices, labeled edges and boundary of one level-n gasket graph.

    Each length-n word contributes the three edges of its cell; the edge
    {F_w(p_i), F_w(p_j)} carries the label of the remaining corner, so a
    label-k edge always takes the level's k-th conductance regardless of how
    the maps permute the corners.
    """

    def __init__(self, vertex_index, edges, level):
        self.vertex_index = vertex_index
        self.edges = edges  # list of (u, v, word, label)
        self.level = level
        self.boundary = vertex_index.boundary

    def __len__(self):
        return len(self.vertex_index)


def build_graph(maps, n, guard=lattice.LEVEL_GUARD):
    """Construct the level-n graph for either IFS variant: 3^(n+1) labeled edges."""
    index = lattice.build_vertices(maps, n, guard)
    edges = []
    for word, (q1, q2, q3) in lattice.iter_cells(maps, n):
        g1, g2, g3 = index.id_of(q1), index.id_of(q2), index.id_of(q3)
        edges.append((g2, g3, word, 1))
        edges.append((g1, g3, word, 2))
        edges.append((g1, g2, word, 3))
    return LevelGraph(index, edges, n)


class EnergyForm:
    """Sparse PSD quadratic form E(u) = u^T L u over a list of vertex ids."""

    def __init__(self, L, ids):
        self.L = sp.csr_matrix(L)
        self.ids = tuple(ids)

    @property
    def dim(self):
        return self.L.shape[0]

    def energy(self, u):
        u = np.asarray(u, dtype=float)
        return float(u @ (self.L @ u))

    def dense(self):
        return self.L.toarray()


def assemble_energy(g, t):
    """Stamp the weighted Laplacian: label-k edges get conductance (a,b,c)[k-1].

    Parallel edges would simply sum; the gasket itself never produces any.
    """
    w = {1: t.a, 2: t.b, 3: t.c}
    n = len(g)
    rows, cols, data = [], [], []
    for u, v, _word, label in g.edges:
        c = w[label]
        rows += [u, v, u, v]
        cols += [v, u, u, v]
        data += [-c, -c, c, c]
    L = sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()
    return EnergyForm(L, range(n))


def _interior_factor(L_ii):
    try:
        return spla.splu(sp.csc_matrix(L_ii))
    except RuntimeError as e:
        raise SingularInterior(str(e)) from None


def trace_to_subset(f, keep):
    """Schur complement onto `keep`: the energy induced by minimizing elsewhere.

    keep is an ordered sequence of row indices of f; the result's rows follow
    that order.  Tracing to the full set is the identity.
    """
    keep = list(keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    n = f.dim
    interior = [i for i in range(n) if i not in set(keep)]
    L = f.L
    L_kk = L[keep, :][:, keep]
    if not interior:
        return EnergyForm(L_kk, [f.ids[i] for i in keep])
    L_ik = L[interior, :][:, keep]
    L_ki = L[keep, :][:, interior]
    lu = _interior_factor(L[interior, :][:, interior])
    X = lu.solve(L_ik.toarray())
    S = L_kk.toarray() - L_ki.toarray() @ X
    S = (S + S.T) / 2
    return EnergyForm(S, [f.ids[i] for i in keep])


def harmonic_extension(f, boundary_ids, boundary_values):
    """Energy-minimizing extension of boundary data: solve the interior block.

    Returns the full vector over f's vertex set; its energy equals the traced
    form evaluated on the boundary values.
    """
    boundary_ids = list(boundary_ids)
    if not boundary_ids:
        raise ValueError("boundary_ids must be nonempty")
    n = f.dim
    interior = [i for i in range(n) if i not in set(boundary_ids)]
    u = np.zeros(n)
    u[boundary_ids] = boundary_values
    if interior:
        L = f.L
        lu = _interior_factor(L[interior, :][:, interior])
        rhs = -L[interior, :][:, boundary_ids] @ np.asarray(boundary_values, dtype=float)
        u[interior] = lu.solve(rhs)
    return u


def two_scale_estimate(g, u):
    """The level-n term of the two-exponent energy expression.

    2^n * sum over cells of [ (d label-1)^2 + (3/4)^n ((d label-2)^2 + (d label-3)^2) ]
    where d is the difference of u across the edge.  The caller takes running
    maxima over n; the strong direction and the two weak directions scale
    differently, which is the fingerprint of the asymmetric forms.
    """
    u = np.asarray(u, dtype=float)
    s_strong = 0.0
    s_weak = 0.0
    for a, b, _word, label in g.edges:
        d2 = (u[a] - u[b]) ** 2
        if label == 1:
            s_strong += d2
        else:
            s_weak += d2
    n = g.level
    return 2.0 ** n * (s_strong + 0.75 ** n * s_weak)


def export_coo(f, stream):
    """Write the form's matrix as 'row col value' lines (sorted, full precision)."""
    coo = f.L.tocoo()
    entries = sorted(zip(coo.row, coo.col, coo.data))
    for i, j, v in entries:
        stream.write(f"{i} {j} {v:.17g}\n")
