"""Exact integer geometry of the level-n gasket graphs.

Vertices live on the oblique lattice spanned by e1 = p2 and e2 = p3: a point
at level L has integer coordinates (i, j) denoting (i*p2 + j*p3) / 2^L.  All
map applications and deduplication happen in integer arithmetic, so no
floating-point comparison is ever needed to identify a vertex.
"""

import math
from dataclasses import dataclass

# refuse to enumerate beyond this level by default (3^13 cells is no longer desk scale)
LEVEL_GUARD = 12

SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True, eq=False)
class LatticePoint:
    """A dyadic lattice point (i*p2 + j*p3) / 2^level."""

    i: int
    j: int
    level: int

    def _key(self):
        # canonical form: divide out common factors of 2 so that the same
        # plane point compares equal across levels
        i, j, level = self.i, self.j, self.level
        while level > 0 and i % 2 == 0 and j % 2 == 0:
            i //= 2
            j //= 2
            level -= 1
        return (i, j, level)

    def __eq__(self, other):
        if not isinstance(other, LatticePoint):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def xy(self):
        """Euclidean coordinates with p2 = (1, 0), p3 = (1/2, sqrt(3)/2).

        For plotting and distance tables only -- never used for identity tests.
        """
        s = 0.5 ** self.level
        return ((self.i + 0.5 * self.j) * s, self.j * SQRT3_2 * s)


@dataclass(frozen=True)
class AffineLatticeMap:
    """One contraction, acting on level-L coordinates as v -> m @ v + 2^L * t.

    The linear part m is an integer matrix with |det| = 1 (the contraction by
    1/2 is absorbed by the level increment), t an integer translation given in
    level-1 half-coordinates.
    """

    m: tuple  # ((m11, m12), (m21, m22))
    t: tuple  # (t1, t2)

    def apply(self, p):
        (m11, m12), (m21, m22) = self.m
        s = 2 ** p.level
        return LatticePoint(
            m11 * p.i + m12 * p.j + s * self.t[0],
            m21 * p.i + m22 * p.j + s * self.t[1],
            p.level + 1,
        )

    def det(self):
        (m11, m12), (m21, m22) = self.m
        return m11 * m22 - m12 * m21


IDENT = ((1, 0), (0, 1))


def standard_ifs():
    """The three half-scale contractions toward the corners p1, p2, p3."""
    return [
        AffineLatticeMap(IDENT, (0, 0)),
        AffineLatticeMap(IDENT, (1, 0)),
        AffineLatticeMap(IDENT, (0, 1)),
    ]


def twisted_ifs():
    """Contractions composed with the reflection across each corner's bisector.

    The linear parts were derived by hand from the complex-arithmetic
    definitions (conjugate, rotate, contract); each is a lattice reflection
    with determinant -1.  A unit test re-derives them numerically.
    """
    return [
        AffineLatticeMap(((0, 1), (1, 0)), (0, 0)),
        AffineLatticeMap(((1, 0), (-1, -1)), (1, 1)),
        AffineLatticeMap(((-1, -1), (0, 1)), (1, 1)),
    ]


def corner_point(corner, level=0):
    """The corner p1, p2 or p3 (corner in {1,2,3}) as a level-`level` point."""
    if corner == 1:
        return LatticePoint(0, 0, level)
    if corner == 2:
        return LatticePoint(2 ** level, 0, level)
    if corner == 3:
        return LatticePoint(0, 2 ** level, level)
    raise ValueError("corner must be 1, 2 or 3")


def apply_word(maps, word, corner):
    """Evaluate F_word(p_corner) exactly; leftmost letter is the outermost map.

    `word` is a sequence over {1,2,3}; the empty word gives the corner itself.
    """
    p = corner_point(corner)
    for letter in reversed(word):
        p = maps[letter - 1].apply(p)
    return p


def iter_cells(maps, n):
    """Yield (word, (q1, q2, q3)) for every length-n word in lexicographic order.

    q_k = F_word(p_k) are the cell corners at level n.  Words are built by a
    running composite (M, tau) with F_word(v) = M v + tau on level-0 integer
    coordinates, so each extension costs O(1).
    """
    p0 = [(0, 0), (1, 0), (0, 1)]  # level-0 corner coordinates

    def emit(word, mm, tau):
        if len(word) == n:
            (m11, m12), (m21, m22) = mm
            t1, t2 = tau
            corners = tuple(
                LatticePoint(m11 * i + m12 * j + t1, m21 * i + m22 * j + t2, n)
                for (i, j) in p0
            )
            yield word, corners
            return
        for letter in (1, 2, 3):
            f = maps[letter - 1]
            (m11, m12), (m21, m22) = mm
            (f11, f12), (f21, f22) = f.m
            # append the letter as the innermost map: M' = M Mf, tau' = M tf + 2 tau
            mm2 = (
                (m11 * f11 + m12 * f21, m11 * f12 + m12 * f22),
                (m21 * f11 + m22 * f21, m21 * f12 + m22 * f22),
            )
            tau2 = (
                m11 * f.t[0] + m12 * f.t[1] + 2 * tau[0],
                m21 * f.t[0] + m22 * f.t[1] + 2 * tau[1],
            )
            yield from emit(word + (letter,), mm2, tau2)

    yield from emit((), IDENT, (0, 0))


class VertexIndex:
    """Dense integer ids for the deduplicated vertices of one level."""

    def __init__(self, points, boundary, level):
        self.points = points
        self.level = level
        self.boundary = boundary  # ids of p1, p2, p3
        self._ids = {p._key(): k for k, p in enumerate(points)}

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p._key() in self._ids

    def id_of(self, p):
        return self._ids[p._key()]


def build_vertices(maps, n, guard=LEVEL_GUARD):
    """Enumerate and deduplicate F_word(p_k) over all length-n words.

    Ids are assigned in first-encounter order of the lexicographic cell
    enumeration, which makes them deterministic.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    if n > guard:
        raise ValueError(f"level {n} exceeds the guard {guard}")
    points = []
    seen = {}
    for _word, corners in iter_cells(maps, n):
        for q in corners:
            key = q._key()
            if key not in seen:
                seen[key] = len(points)
                points.append(q)
    boundary = tuple(seen[corner_point(k, n)._key()] for k in (1, 2, 3))
    return VertexIndex(points, boundary, n)
