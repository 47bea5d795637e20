"""Plane 1-forms, dual vector fields, linear parts and singularity data.

Conventions, fixed once for the whole package:

* a 1-form is  omega = a d(v1) + b d(v2)  over ordered variables (v1, v2);
* its dual field is  X = b d/d(v1) - a d/d(v2),  so that omega(X) = 0;
* the divisor chart always has the divisor at {v1 = 0};
* the linear part of a field (P, Q) at a singular point is the matrix
  [[dP/dv1, dP/dv2], [dQ/dv1, dQ/dv2]].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath

from .errors import MathError
from .rings import (ComplexApprox, ParamPolyRing, RationalExact, rational,
                    rational_sqrt)
from .series import Series1, Series2


@dataclass(frozen=True)
class OneForm2:
    """omega = a d(v1) + b d(v2); not both coefficients zero."""

    a: Series2
    b: Series2

    def __post_init__(self):
        if self.a.variables != self.b.variables:
            raise ValueError("form coefficients use different variables")
        if self.a.ring != self.b.ring:
            raise ValueError("form coefficients use different rings")
        if self.a.is_zero() and self.b.is_zero():
            raise MathError("the zero 1-form does not define a foliation")

    @property
    def ring(self):
        return self.a.ring

    @property
    def variables(self):
        return self.a.variables

    @property
    def order(self):
        return min(self.a.order, self.b.order)

    def valuation(self):
        return min(self.a.valuation(), self.b.valuation())

    def scale(self, value) -> "OneForm2":
        return OneForm2(self.a.scale(value), self.b.scale(value))

    def swapped(self) -> "OneForm2":
        """The same form read with the variables in the other order."""
        return OneForm2(self.b.swap_variables(), self.a.swap_variables())

    def divisor_invariant(self) -> bool:
        """Whether {v1 = 0} is a leaf: the d(v2)-coefficient must vanish
        identically on it."""
        return self.b.restrict_first_zero().is_zero()

    def format(self) -> str:
        v1, v2 = self.variables
        return "(%s)*d%s + (%s)*d%s" % (self.a.format(), v1, self.b.format(), v2)


@dataclass(frozen=True)
class PlaneVectorField:
    """X = p1 d/d(v1) + p2 d/d(v2)."""

    p1: Series2
    p2: Series2

    def __post_init__(self):
        if self.p1.variables != self.p2.variables:
            raise ValueError("field components use different variables")
        if self.p1.ring != self.p2.ring:
            raise ValueError("field components use different rings")

    @property
    def ring(self):
        return self.p1.ring

    @property
    def variables(self):
        return self.p1.variables


def dual(omega: OneForm2) -> PlaneVectorField:
    """The dual field (b, -a) of a d(v1) + b d(v2)."""
    return PlaneVectorField(omega.b, -omega.a)


def dual_field(field: PlaneVectorField) -> OneForm2:
    """The 1-form (p2, -p1) annihilated by the field; applying the
    convention twice rotates (a, b) to (-a, -b)."""
    return OneForm2(field.p2, -field.p1)


def wedge(omega: OneForm2, eta: OneForm2) -> Series2:
    """Coefficient of d(v1)^d(v2) in omega wedge eta."""
    if omega.variables != eta.variables:
        raise ValueError("wedge of forms over different variables")
    return omega.a * eta.b - omega.b * eta.a


Matrix2 = tuple  # ((e00, e01), (e10, e11)) of ring elements


def linear_part(field: PlaneVectorField, at=(0, 0)) -> Matrix2:
    """Jacobian of the field at a singular point (verified)."""
    ring = field.ring
    variables = field.variables
    order = min(field.p1.order, field.p2.order)
    c1, c2 = (ring.coerce(c) for c in at)
    rows = []
    if ring.is_zero(c1) and ring.is_zero(c2):
        for comp in (field.p1, field.p2):
            if not ring.is_zero(comp.coefficient(0, 0)):
                raise MathError("linear part requested at a non-singular point")
            rows.append((comp.coefficient(1, 0), comp.coefficient(0, 1)))
        return (rows[0], rows[1])
    ex = Series2(ring, variables, order, {(1, 0): 1, (0, 0): c1})
    ey = Series2(ring, variables, order, {(0, 1): 1, (0, 0): c2})
    cache = {}
    for comp in (field.p1, field.p2):
        local = comp.substitute(ex, ey, cache)
        if not ring.is_zero(local.coefficient(0, 0)):
            raise MathError("linear part requested at a non-singular point")
        rows.append((local.coefficient(1, 0), local.coefficient(0, 1)))
    return (rows[0], rows[1])


def matrix_is_zero(L: Matrix2, ring) -> bool:
    return all(ring.is_zero(e) for row in L for e in row)


def matrix_scale(L: Matrix2, value, ring) -> Matrix2:
    return tuple(tuple(ring.mul(e, value) for e in row) for row in L)


def matrix_eq(L: Matrix2, M: Matrix2, ring) -> bool:
    return all(ring.eq(a, b) for ra, rb in zip(L, M) for a, b in zip(ra, rb))


def normalized_jordan(L: Matrix2, ring) -> Matrix2:
    """Scale a lower-triangular matrix with equal diagonal to unit diagonal."""
    if not ring.is_zero(L[0][1]):
        raise MathError("expected a lower-triangular linear part")
    if not ring.eq(L[0][0], L[1][1]):
        raise MathError("expected equal diagonal entries")
    inv = ring.invert(L[0][0])
    return matrix_scale(L, inv, ring)


def eigenvalues(L: Matrix2, ring):
    """Eigenvalue pair and an exactness flag.

    Triangular matrices are read off exactly in any ring.  Otherwise the
    characteristic polynomial is solved: exactly over the rationals when
    the discriminant is a rational square, numerically in a complex ring,
    and not at all over a parameter ring.
    """
    (a, b), (c, d) = L
    if ring.is_zero(b) or ring.is_zero(c):
        return (a, d), True
    if isinstance(ring, ParamPolyRing):
        raise MathError("cannot solve a full 2x2 eigenproblem over Q[%s]"
                        % ring.param)
    tr = ring.add(a, d)
    det = ring.sub(ring.mul(a, d), ring.mul(b, c))
    if isinstance(ring, RationalExact):
        disc = tr * tr - 4 * det
        root = rational_sqrt(disc) if disc >= 0 else None
        if root is None:
            half = mpmath.mpf(int(tr.numerator)) / int(tr.denominator) / 2
            rad = mpmath.sqrt(mpmath.mpf(int(disc.numerator))
                              / int(disc.denominator)) / 2
            return (mpmath.mpc(half + rad), mpmath.mpc(half - rad)), False
        two_inv = rational(1, 2)
        return ((tr + root) * two_inv, (tr - root) * two_inv), True
    rad = mpmath.sqrt(tr * tr - 4 * det)
    half = ring.coerce(rational(1, 2))
    return (ring.mul(ring.add(tr, rad), half),
            ring.mul(ring.sub(tr, rad), half)), False


class SingKind(Enum):
    REGULAR = "regular"
    REDUCED_HYPERBOLIC = "reduced_hyperbolic"
    RESONANT = "resonant"
    SADDLE_NODE = "saddle_node"
    POINCARE_DULAC_CANDIDATE = "poincare_dulac_candidate"
    DICRITICAL_CANDIDATE = "dicritical_candidate"
    POSITIVE_RATIONAL = "positive_rational"
    NON_ELEMENTARY = "non_elementary"


@dataclass(frozen=True)
class SingularityType:
    kind: SingKind
    ratio: object = None       # exact rational, or complex approximation
    m: int | None = None       # integer eigenvalue ratio for PD candidates
    approximate: bool = False

    def json(self):
        out = {"kind": self.kind.value, "approximate": self.approximate}
        if self.ratio is not None:
            out["ratio"] = (format_ratio(self.ratio))
        if self.m is not None:
            out["m"] = self.m
        return out


def format_ratio(r):
    try:
        return "%d/%d" % (r.numerator, r.denominator)
    except AttributeError:
        return [float(mpmath.mpc(r).real), float(mpmath.mpc(r).imag)]


def _rational_of_eigen(value, ring):
    """Exact rational content of an eigenvalue, or a float approximation."""
    q = ring.as_rational(value) if not isinstance(value, (mpmath.mpc, mpmath.mpf)) else None
    return q


def classify_singularity(L: Matrix2, ring) -> SingularityType:
    """Tag a 2x2 linear part; total on matrices.

    Nonzero nilpotent matrices count as non-elementary (no nonzero
    eigenvalue).  Positive rational ratios that are neither an integer
    >= 2 nor its inverse, including a ratio-1 Jordan block, are tagged
    POSITIVE_RATIONAL: non-reduced but not a Poincare-Dulac candidate.
    """
    if matrix_is_zero(L, ring):
        return SingularityType(SingKind.NON_ELEMENTARY)
    (e00, e01), (e10, e11) = L
    scalar = (ring.is_zero(e01) and ring.is_zero(e10)
              and ring.eq(e00, e11) and not ring.is_zero(e00))
    if scalar:
        return SingularityType(SingKind.DICRITICAL_CANDIDATE)
    (l1, l2), exact = eigenvalues(L, ring)

    def is_zero_eig(v):
        if exact and not isinstance(v, (mpmath.mpc, mpmath.mpf)):
            return ring.is_zero(v)
        return abs(mpmath.mpc(v)) <= getattr(ring, "tol", 1e-9)

    z1, z2 = is_zero_eig(l1), is_zero_eig(l2)
    if z1 and z2:
        return SingularityType(SingKind.NON_ELEMENTARY, approximate=not exact)
    if z1 or z2:
        return SingularityType(SingKind.SADDLE_NODE, approximate=not exact)

    if exact:
        q1 = ring.as_rational(l1)
        q2 = ring.as_rational(l2)
        if q1 is not None and q2 is not None:
            ratio = rational(q1) / rational(q2)
            if ratio < 0:
                return SingularityType(SingKind.RESONANT, ratio=ratio)
            for cand in (ratio, 1 / ratio):
                if cand.denominator == 1 and cand >= 2:
                    return SingularityType(
                        SingKind.POINCARE_DULAC_CANDIDATE, ratio=ratio,
                        m=int(cand.numerator))
            return SingularityType(SingKind.POSITIVE_RATIONAL, ratio=ratio)
        if isinstance(ring, ParamPolyRing):
            raise MathError("eigenvalues depend on the parameter %s; "
                            "classification needs numeric values" % ring.param)
        # exact triangular matrix over a complex ring falls through to the
        # approximate tests below
    tol = getattr(ring, "tol", 1e-9)
    r = mpmath.mpc(l1) / mpmath.mpc(l2)
    if abs(r.imag) <= tol * max(1.0, abs(r)):
        x = r.real
        for cand in (x, 1 / x):
            n = mpmath.nint(cand)
            if n >= 2 and abs(cand - n) <= tol * max(1.0, abs(cand)):
                return SingularityType(SingKind.POINCARE_DULAC_CANDIDATE,
                                       ratio=r, m=int(n), approximate=True)
        if x < 0:
            frac = _near_rational(x, tol)
            if frac is not None:
                return SingularityType(SingKind.RESONANT, ratio=frac,
                                       approximate=True)
        elif x > 0:
            frac = _near_rational(x, tol)
            if frac is not None:
                return SingularityType(SingKind.POSITIVE_RATIONAL, ratio=frac,
                                       approximate=True)
    return SingularityType(SingKind.REDUCED_HYPERBOLIC, ratio=r,
                           approximate=True)


def _near_rational(x, tol, max_den=1000):
    """Best small-denominator rational within 10*tol of x, or None."""
    from fractions import Fraction
    f = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(f) - float(x)) <= 10 * tol * max(1.0, abs(float(x))):
        return rational(f.numerator, f.denominator)
    return None


def cs_index(field: PlaneVectorField, z0):
    """Camacho-Sad index of the divisor {v1 = 0} at the point v2 = z0.

    Writing the field as v1*ptilde d/dv1 + q d/dv2, the index is the
    residue at z0 of ptilde(0, v2)/q(0, v2), i.e. the coefficient of
    (v2 - z0)^(s-1) in ptilde(0, v2)/u(v2) where q(0, v2) =
    (v2 - z0)^s u(v2), u(z0) != 0.  Simple zeros (s = 1) cover every
    point the reduction pipeline produces; higher s costs nothing with
    the same unit division, so it is not rejected.
    """
    ring = field.ring
    px, q = field.p1, field.p2
    if not (px.is_zero() or px.min_exponent(0) >= 1):
        raise MathError("divisor {%s = 0} is not invariant"
                        % field.variables[0])
    if px.is_zero():
        ptilde0 = Series1.zero(ring, field.variables[1], q.order)
    else:
        ptilde0 = px.divide_monomial((1, 0)).restrict_first_zero()
    q0 = q.restrict_first_zero()
    if q0.is_zero():
        raise MathError("every divisor point is singular; no isolated index")
    z0 = ring.coerce(z0)
    if not ring.is_zero(z0):
        q0 = q0.translate(z0)
        ptilde0 = ptilde0.translate(z0)
    s = q0.valuation()
    if s is math.inf or s < 1:
        raise MathError("the point is not singular on the divisor")
    unit = q0.divide_monomial(s)
    ratio = ptilde0 * unit.inverse_unit()
    return ratio.coefficient(s - 1)


@dataclass(frozen=True)
class SingularityReport:
    """One singular point of a reduced form, as reported to the user."""

    chart: str
    location: object            # coordinate along the divisor (ring element)
    linear: Matrix2
    eigenvalues: tuple
    eigen_exact: bool
    type: SingularityType
    cs: object = None           # Camacho-Sad index along the divisor
    corner: bool = False

    def json(self, ring):
        def val(v):
            if isinstance(v, (mpmath.mpc, mpmath.mpf)):
                c = mpmath.mpc(v)
                return [float(c.real), float(c.imag)]
            return ring.json_value(v)
        out = {
            "chart": self.chart,
            "corner": self.corner,
            "location": None if self.location is None else val(self.location),
            "linear_part": [[val(e) for e in row] for row in self.linear],
            "eigenvalues": [val(e) for e in self.eigenvalues],
            "eigenvalues_exact": self.eigen_exact,
            "type": self.type.json(),
        }
        if self.cs is not None:
            out["cs_index"] = val(self.cs)
        return out


def report_at(omega: OneForm2, z0, chart: str, corner: bool = False,
              with_cs: bool = True) -> SingularityReport:
    """Classify the singular point of omega at (0, z0) on the divisor."""
    ring = omega.ring
    X = dual(omega)
    L = linear_part(X, (0, z0))
    eigs, exact = eigenvalues(L, ring)
    kind = classify_singularity(L, ring)
    cs = cs_index(X, z0) if with_cs else None
    return SingularityReport(chart=chart, location=ring.coerce(z0), linear=L,
                             eigenvalues=eigs, eigen_exact=exact, type=kind,
                             cs=cs, corner=corner)
