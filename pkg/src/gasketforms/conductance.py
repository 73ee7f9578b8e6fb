"""Conductance recursions: delta-Y transforms, coarsening/refinement, dichotomy.

Level-n edge conductances (a, b, c) are carried equivalently as Y-network
branch resistances (x, y, z) via the delta-Y transform.  Refining means
solving the coarsening equations one level down; the closed symmetric forms
and a Newton solver for the general case both live here, together with the
random-walk renormalization map they mirror.
"""

import math
from dataclasses import dataclass

import numpy as np

STANDARD = "standard"
TWISTED = "twisted"


class NoPositiveSolution(Exception):
    """The coarsening equations admit no positive solution from this data."""


class IterationLimit(Exception):
    """Newton did not settle within the iteration budget (inconclusive)."""


def _check_variant(variant):
    if variant not in (STANDARD, TWISTED):
        raise ValueError(f"unknown variant {variant!r}")


def _positive_triple(name, *vals):
    for v in vals:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} components must be positive and finite")


@dataclass(frozen=True)
class ConductanceTriple:
    """Edge conductances of one level, labeled by the opposite corner."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        _positive_triple("ConductanceTriple", self.a, self.b, self.c)

    def as_tuple(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class YTriple:
    """Branch resistances of the equivalent Y-network (toward p1, p2, p3)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        _positive_triple("YTriple", self.x, self.y, self.z)

    def as_tuple(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class ProbTriple:
    """Direction probabilities of the renormalized random walk."""

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        s = self.a1 + self.a2 + self.a3
        if abs(s - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")
        for v in (self.a1, self.a2, self.a3):
            if v < 0 or v > 1:
                raise ValueError("probabilities must lie in [0, 1]")

    def as_tuple(self):
        return (self.a1, self.a2, self.a3)


def delta_to_y(t):
    """Triangle conductances -> Y resistances: (a,b,c)/eta with eta = ab+bc+ca."""
    a, b, c = t.as_tuple()
    eta = a * b + b * c + c * a
    return YTriple(a / eta, b / eta, c / eta)


def y_to_delta(y):
    """Y resistances -> triangle conductances: (x,y,z)/r with r = xy+yz+zx."""
    x, yy, z = y.as_tuple()
    r = x * yy + yy * z + z * x
    return ConductanceTriple(x / r, yy / r, z / r)


def _coarsen_raw(x, yy, z, variant):
    s = x + yy + z
    if variant == STANDARD:
        return (
            x + (x + yy) * (x + z) / (2 * s),
            yy + (yy + z) * (yy + x) / (2 * s),
            z + (z + x) * (z + yy) / (2 * s),
        )
    return (
        x + 2 * yy * z / s,
        yy + 2 * z * x / s,
        z + 2 * x * yy / s,
    )


def coarsen(y, variant):
    """One exact coarsening step (level n data -> level n-1 data), Y side.

    Standard gasket: v_i' = v_i + (v_i+v_j)(v_i+v_k) / (2(v_i+v_j+v_k)).
    Twisted gasket:  v_i' = v_i + 2 v_j v_k / (v_i+v_j+v_k).
    """
    _check_variant(variant)
    return YTriple(*_coarsen_raw(*y.as_tuple(), variant))


def refine_symmetric(x, y, variant):
    """Closed-form refinement for y = z data; returns (x', y') with x' >= y' > 0.

    The y' formulas subtract nearly equal quantities when y << x, so they are
    evaluated in the conjugate arrangement, which is cancellation-free.  Exact
    x == y input short-circuits to (3x/5, 3x/5): the twisted map amplifies any
    transverse rounding noise, so preserving the symmetric line exactly matters.
    """
    _check_variant(variant)
    if not (y > 0 and math.isfinite(x)):
        raise ValueError("need x >= y > 0")
    if x < y:
        raise ValueError("no positive refinement exists for x < y")
    if x == y:
        t = 3 * x / 5
        return t, t
    if variant == STANDARD:
        d = math.sqrt(4 * x * x + 6 * x * y + 6 * y * y)
        x1 = (14 * x + 3 * y - 2 * d) / 15
        # conjugate form of (-2x + y + d)/5
        y1 = (y + (6 * x * y + 6 * y * y) / (d + 2 * x)) / 5
    else:
        d = math.sqrt(9 * x * x - 4 * x * y - 4 * y * y)
        x1 = (x + 2 * y + 3 * d) / 10
        # conjugate form of (3x + y - d)/5
        y1 = (y + (4 * x * y + 4 * y * y) / (3 * x + d)) / 5
    return x1, y1


def _coarsen_jacobian(v, variant):
    x, y, z = v
    s = x + y + z
    if variant == STANDARD:
        s2 = 2 * s * s

        def phi_row(u, vv, w):
            # partials of u + (u+vv)(u+w)/(2s) wrt (u, vv, w)
            du = 1 + ((2 * u + vv + w) * s - (u + vv) * (u + w)) / s2
            dv = (u + w) * w / s2
            dw = (u + vv) * vv / s2
            return du, dv, dw

        r1 = phi_row(x, y, z)
        r2 = phi_row(y, z, x)
        r3 = phi_row(z, x, y)
        # reorder into d/dx, d/dy, d/dz columns
        return np.array(
            [
                [r1[0], r1[1], r1[2]],
                [r2[2], r2[0], r2[1]],
                [r3[1], r3[2], r3[0]],
            ]
        )
    s2 = s * s
    return np.array(
        [
            [1 - 2 * y * z / s2, 2 * z * (x + z) / s2, 2 * y * (x + y) / s2],
            [2 * z * (y + z) / s2, 1 - 2 * z * x / s2, 2 * x * (x + y) / s2],
            [2 * y * (y + z) / s2, 2 * x * (x + z) / s2, 1 - 2 * x * y / s2],
        ]
    )


def refine_general(prev, variant, tol=1e-12, max_iter=100, margin=1e-9):
    """Newton solve of coarsen(v) = prev; the inverse of one coarsening step.

    Starts from the closed symmetric solution of (x, (y+z)/2), which is exact
    when y = z.  Convergence is relative residual <= tol per component.  If an
    iterate's smallest component drops below margin * largest twice in a row,
    one final polish step is attempted and then NoPositiveSolution is raised;
    running out of iterations raises IterationLimit instead (an inconclusive
    outcome, kept distinct on purpose).
    """
    _check_variant(variant)
    px, py, pz = prev.as_tuple()
    target = np.array([px, py, pz])
    # canonical descending order, undone at the end
    order = np.argsort(-target, kind="stable")
    inv = np.argsort(order)
    tgt = target[order]

    x1, y1 = refine_symmetric(tgt[0], (tgt[1] + tgt[2]) / 2, variant)
    v = np.array([x1, y1, y1])

    def residual(v):
        return np.array(_coarsen_raw(v[0], v[1], v[2], variant)) - tgt

    def newton_step(v):
        r = residual(v)
        try:
            return v + np.linalg.solve(_coarsen_jacobian(v, variant), -r)
        except np.linalg.LinAlgError:
            raise NoPositiveSolution("singular Newton system") from None

    def accept(v):
        return (
            np.min(v) > 0
            and np.min(v) >= margin * np.max(v)
            and np.max(np.abs(residual(v)) / tgt) <= tol
        )

    below_count = 0
    for _ in range(max_iter):
        if np.max(np.abs(residual(v)) / tgt) <= tol:
            if np.min(v) <= 0:
                raise NoPositiveSolution()
            return YTriple(*(float(u) for u in v[inv]))
        v = newton_step(v)
        if np.min(v) < margin * np.max(v):
            below_count += 1
            if below_count >= 2:
                # one final polish step; accept only if it lands clean
                vp = newton_step(v)
                if accept(vp):
                    return YTriple(*(float(u) for u in vp[inv]))
                raise NoPositiveSolution()
        else:
            below_count = 0
    raise IterationLimit(f"no convergence in {max_iter} iterations")


def refine_sequence(y0, n_max, variant):
    """Iterate refinement from level-0 Y-data; stop early when it obstructs.

    Returns (list of YTriples, failing_level or None).  Data with y = z
    (exactly) goes through the closed form; everything else through Newton.
    """
    ys = [y0]
    for k in range(1, n_max + 1):
        prev = ys[-1]
        if prev.y == prev.z:
            x1, y1 = refine_symmetric(prev.x, prev.y, variant)
            ys.append(YTriple(x1, y1, y1))
        else:
            try:
                ys.append(refine_general(prev, variant))
            except NoPositiveSolution:
                return ys, k
    return ys, None


@dataclass
class SequenceReport:
    """A refined conductance sequence with its dichotomy classification.

    Triples are stored in canonical descending order; `permutation` maps
    canonical slots back to the caller's input order (canonical[i] came from
    input slot permutation[i]).  `classification` is one of "symmetric",
    "asymmetric", "incompatible" (with `failing_level` set), or
    "indeterminate" for data that should obstruct but outlasted the probe.
    """

    variant: str
    classification: str
    failing_level: object  # int or None
    permutation: tuple
    ys: list  # YTriple per level
    conductances: list  # ConductanceTriple per level

    def levels(self):
        return len(self.ys)

    def csv_text(self):
        lines = ["level,x,y,z,a,b,c"]
        for k, (y, t) in enumerate(zip(self.ys, self.conductances)):
            vals = y.as_tuple() + t.as_tuple()
            lines.append(str(k) + "," + ",".join(f"{v:.17g}" for v in vals))
        return "\n".join(lines) + "\n"

    def json_dict(self):
        return {
            "variant": self.variant,
            "classification": self.classification,
            "failing_level": self.failing_level,
            "permutation": list(self.permutation),
            "levels": [
                {
                    "level": k,
                    "x": y.x,
                    "y": y.y,
                    "z": y.z,
                    "a": t.a,
                    "b": t.b,
                    "c": t.c,
                }
                for k, (y, t) in enumerate(zip(self.ys, self.conductances))
            ],
        }


def conductance_sequence(a0, b0, c0, n_max, variant):
    """Refine initial conductances (a0, b0, c0) for n_max levels.

    The triple is canonicalized by sorting in descending order first (the
    recursion commutes with relabeling the corners), and an obstruction is
    reported as the classification rather than raised.
    """
    t0 = ConductanceTriple(a0, b0, c0)
    order = sorted(range(3), key=lambda i: -t0.as_tuple()[i])
    canon = tuple(t0.as_tuple()[i] for i in order)
    y0 = delta_to_y(ConductanceTriple(*canon))

    ys, failing = refine_sequence(y0, n_max, variant)
    if failing is not None:
        classification = "incompatible"
    elif canon[0] == canon[1] == canon[2]:
        classification = "symmetric"
    elif canon[1] == canon[2]:
        classification = "asymmetric"
    else:
        classification = "indeterminate"
    return SequenceReport(
        variant=variant,
        classification=classification,
        failing_level=failing,
        permutation=tuple(order),
        ys=ys,
        conductances=[y_to_delta(y) for y in ys],
    )


def hattori_T(alpha):
    """Renormalization of the walk's direction probabilities, normalized to 1."""
    a1, a2, a3 = alpha.as_tuple()
    t1 = a1 + a2 * a3 / 3
    t2 = a2 + a3 * a1 / 3
    t3 = a3 + a1 * a2 / 3
    s = t1 + t2 + t3
    return ProbTriple(t1 / s, t2 / s, t3 / s)


def w_step(w):
    """Next weight of the asymptotically one-dimensional walk recursion.

    Same map as y'/x' of the symmetric closed form; evaluated cancellation-free
    (the naive -2 + sqrt(...) arrangement loses digits for small w).
    """
    if not 0 < w <= 1:
        raise ValueError("w must lie in (0, 1]")
    d = math.sqrt(4 + 6 * w + 6 * w * w)
    return (3 * w + (6 * w + 6 * w * w) / (2 + d)) / (6 - w)
