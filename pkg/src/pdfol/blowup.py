"""Point blow-ups of plane 1-forms and iterated reduction chains.

Blowing up the origin replaces it by an exceptional line and is computed
in two charts.  For omega = a d(v1) + b d(v2):

* chart 1 substitutes v2 = v1*z, giving
      (a(x, xz) + z*b(x, xz)) dx + x*b(x, xz) dz
  in variables (x, z) = (v1, z), with the divisor at {x = 0};
* chart 2 substitutes v1 = w*v2, giving
      y*a(wy, y) dw + (w*a(wy, y) + b(wy, y)) dy
  in variables (w, y) = (w, v2), with the divisor at {y = 0}.

Both pull-backs acquire a common divisor power which is divided out; the
exponent is the multiplicity nu of the form in the non-dicritical case
and nu + 1 in the dicritical one.  Substitutions here are monomial, so
they are carried out as exact exponent remaps rather than through the
generic composition machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import MathError, PrecisionError
from .forms import OneForm2
from .rings import (ComplexApprox, ParamPolyRing, RationalExact, rational,
                    rational_sqrt)
from .series import Series1, Series2


def _remap(series: Series2, image, variables, order) -> Series2:
    acc = {}
    for key, c in series.coeffs.items():
        acc[image(key)] = c
    return Series2(series.ring, variables, order, acc,
                   truncated=series.truncated)


def _exact(omega: OneForm2) -> bool:
    return not (omega.a.truncated or omega.b.truncated)


@dataclass(frozen=True)
class BlowupResult:
    """One chart of a single point blow-up, already divided down."""

    form: OneForm2
    chart: str                 # "chart1" or "chart2"
    nu: int                    # multiplicity of the form that was blown up
    k_divided: int             # divisor power removed from the pull-back
    dicritical: bool
    divisor_index: int         # 0: divisor {v1 = 0}, 1: divisor {v2 = 0}

    def divisor_first(self) -> OneForm2:
        """The chart form rewritten so the divisor is {first variable = 0}."""
        return self.form if self.divisor_index == 0 else self.form.swapped()


def _finish(nu, a_new, b_new, chart, divisor_index):
    axis = divisor_index
    k = int(min(a_new.min_exponent(axis), b_new.min_exponent(axis)))
    delta = (k, 0) if axis == 0 else (0, k)
    a_new = a_new.divide_monomial(delta)
    b_new = b_new.divide_monomial(delta)
    along = b_new if axis == 0 else a_new
    if axis == 0:
        restricted = along.restrict_first_zero()
    else:
        restricted = along.swap_variables().restrict_first_zero()
    dicritical = not restricted.is_zero()
    if _exact(OneForm2(a_new, b_new)) and k != nu + (1 if dicritical else 0):
        raise MathError("inconsistent divisor multiplicity in blow-up")
    return BlowupResult(OneForm2(a_new, b_new), chart, nu, k, dicritical,
                        divisor_index)


def blowup_chart1(omega: OneForm2, zname: str = "z") -> BlowupResult:
    v1 = omega.variables[0]
    if zname == v1:
        raise ValueError("chart variable clashes with %r" % v1)
    if not singular_at_origin(omega):
        raise MathError("blow-up requested at a nonsingular origin")
    nu = omega.valuation()
    order = 2 * omega.order if _exact(omega) else omega.order
    variables = (v1, zname)
    a1 = _remap(omega.a, lambda ij: (ij[0] + ij[1], ij[1]), variables, order)
    zb1 = _remap(omega.b, lambda ij: (ij[0] + ij[1], ij[1] + 1), variables, order)
    xb1 = _remap(omega.b, lambda ij: (ij[0] + ij[1] + 1, ij[1]), variables, order)
    return _finish(nu, a1 + zb1, xb1, "chart1", 0)


def blowup_chart2(omega: OneForm2, wname: str = "w") -> BlowupResult:
    v2 = omega.variables[1]
    if wname == v2:
        raise ValueError("chart variable clashes with %r" % v2)
    if not singular_at_origin(omega):
        raise MathError("blow-up requested at a nonsingular origin")
    nu = omega.valuation()
    order = 2 * omega.order if _exact(omega) else omega.order
    variables = (wname, v2)
    ya2 = _remap(omega.a, lambda ij: (ij[0], ij[0] + ij[1] + 1), variables, order)
    wa2 = _remap(omega.a, lambda ij: (ij[0] + 1, ij[0] + ij[1]), variables, order)
    b2 = _remap(omega.b, lambda ij: (ij[0], ij[0] + ij[1]), variables, order)
    return _finish(nu, ya2, wa2 + b2, "chart2", 1)


def macro_chart1(omega: OneForm2, p: int, zname: str = "z"):
    """The composite of p chart-1 blow-ups in one substitution v2 = v1^p z.

    Returns the divided-down form and the removed divisor power.  Used as
    an independent consistency check of the step-by-step chain.
    """
    if p < 1:
        raise ValueError("need p >= 1")
    v1 = omega.variables[0]
    variables = (v1, zname)
    order = (p + 1) * omega.order if _exact(omega) else omega.order
    ring = omega.ring
    # dv2 = p x^(p-1) z dx + x^p dz
    a_part = _remap(omega.a, lambda ij: (ij[0] + p * ij[1], ij[1]),
                    variables, order)
    zb = _remap(omega.b, lambda ij: (ij[0] + p * ij[1] + p - 1, ij[1] + 1),
                variables, order).scale(ring.coerce(p))
    xb = _remap(omega.b, lambda ij: (ij[0] + p * ij[1] + p, ij[1]),
                variables, order)
    a_new = a_part + zb
    b_new = xb
    k = int(min(a_new.min_exponent(0), b_new.min_exponent(0)))
    a_new = a_new.divide_monomial((k, 0))
    b_new = b_new.divide_monomial((k, 0))
    return OneForm2(a_new, b_new), k


def recenter(omega: OneForm2, z0) -> OneForm2:
    """Translate the second variable so the point (0, z0) moves to the
    origin.  Exact on polynomial data; raises PrecisionError on truncated
    series, whose translated low-order coefficients would be unreliable."""
    ring = omega.ring
    z0 = ring.coerce(z0)
    if ring.is_zero(z0):
        return omega
    order = omega.order
    ex = Series2(ring, omega.variables, order, {(1, 0): 1})
    ey = Series2(ring, omega.variables, order, {(0, 1): 1, (0, 0): z0})
    cache = {}
    return OneForm2(omega.a.substitute(ex, ey, cache),
                    omega.b.substitute(ex, ey, cache))


@dataclass(frozen=True)
class DivisorPoint:
    location: object           # None marks the corner at chart infinity
    multiplicity: int
    approximate: bool = False
    corner: bool = False


def _eval1(q: Series1, value):
    ring = q.ring
    out = ring.coerce(0)
    for c in reversed(q.as_polynomial_coeffs()):
        out = ring.add(ring.mul(out, value), c)
    return out


def _eval_numeric(q: Series1, value):
    out = mpmath.mpc(0)
    z = mpmath.mpc(value)
    for c in reversed(q.as_polynomial_coeffs()):
        out = out * z + _as_mpc(c)
    return out


def roots_series1(q: Series1):
    """Roots with multiplicity of a polynomial restriction.

    Exact for degree <= 2 over the rationals (floats when the discriminant
    is not a rational square), exact for linear factors over a parameter
    ring, numeric otherwise.
    """
    if q.truncated:
        raise PrecisionError("root finding on a truncated restriction")
    ring = q.ring
    if q.is_zero():
        raise MathError("every point is a root of the zero restriction")
    roots = []
    s = q.valuation()
    if s >= 1:
        roots.append(DivisorPoint(ring.coerce(0), int(s)))
        q = q.divide_monomial(int(s))
    coeffs = q.as_polynomial_coeffs()
    while len(coeffs) > 1 and ring.is_zero(coeffs[-1]):
        coeffs.pop()
    d = len(coeffs) - 1
    if d == 0:
        return roots
    if isinstance(ring, ParamPolyRing):
        consts = [c.constant_value() for c in coeffs]
        if all(c is not None for c in consts):
            inner = Series1(RationalExact(), q.variable, q.order,
                            dict(enumerate(consts)))
            for pt in roots_series1(inner):
                if pt.approximate:
                    raise MathError(
                        "parametric mode needs exact rational roots")
                roots.append(DivisorPoint(ring.coerce(pt.location),
                                          pt.multiplicity))
            return roots
        if d == 1:
            lead = coeffs[1].constant_value()
            if lead is None or lead == 0:
                raise MathError(
                    "parametric root finding needs a constant leading term")
            root = ring.mul(coeffs[0], ring.coerce(rational(-1) / lead))
            roots.append(DivisorPoint(root, 1))
            return roots
        raise MathError("parametric roots are only found for linear factors")
    if d == 1:
        root = ring.neg(ring.div(coeffs[0], coeffs[1]))
        roots.append(DivisorPoint(root, 1,
                                  approximate=isinstance(ring, ComplexApprox)))
        return roots
    if d == 2 and isinstance(ring, RationalExact):
        c0, c1, c2 = coeffs
        disc = c1 * c1 - 4 * c0 * c2
        sq = rational_sqrt(disc) if disc >= 0 else None
        if sq is not None:
            half = rational(1, 2) / c2
            r1 = (-c1 + sq) * half
            r2 = (-c1 - sq) * half
            if r1 == r2:
                roots.append(DivisorPoint(r1, 2))
            else:
                roots.append(DivisorPoint(r1, 1))
                roots.append(DivisorPoint(r2, 1))
            return roots
    # numeric fallback
    with mpmath.workprec(getattr(ring, "precision", 64)):
        poly = [_as_mpc(c) for c in reversed(coeffs)]
        found = mpmath.polyroots(poly, maxsteps=100, extraprec=50)
    for r in found:
        roots.append(DivisorPoint(mpmath.mpc(r), 1, approximate=True))
    return roots


def _as_mpc(c):
    if isinstance(c, (mpmath.mpc, mpmath.mpf)):
        return mpmath.mpc(c)
    return mpmath.mpc(mpmath.mpf(int(c.numerator)) / int(c.denominator))


def singular_points_on_divisor(result: BlowupResult):
    """Singular points of the reduced foliation on the exceptional line,
    in the given chart.  The chart origin of the opposite chart is not
    visible here; a corner marker stands in for it and callers resolve
    it by recomputing the other chart on demand."""
    marker = [DivisorPoint(None, 0, corner=True)]
    omega = result.divisor_first()
    ring = omega.ring
    q = (-omega.a).restrict_first_zero()
    if result.dicritical:
        tangential = omega.b.restrict_first_zero()
        if q.is_zero():
            pts = [] if tangential.is_zero() else roots_series1(tangential)
            return pts + marker
        pts = roots_series1(q)
        keep = []
        for pt in pts:
            if pt.approximate:
                if abs(_eval_numeric(tangential, pt.location)) <= 1e-8:
                    keep.append(pt)
            elif ring.is_zero(_eval1(tangential, ring.coerce(pt.location))):
                keep.append(pt)
        return keep + marker
    if q.is_zero():
        raise MathError("the divisor consists of singular points only")
    return roots_series1(q) + marker


def singular_at_origin(omega: OneForm2) -> bool:
    ring = omega.ring
    return (ring.is_zero(omega.a.coefficient(0, 0))
            and ring.is_zero(omega.b.coefficient(0, 0)))


@dataclass(frozen=True)
class ReductionPath:
    """p successive chart-1 blow-ups of a form, each at the chart origin."""

    original: OneForm2
    steps: list
    last_chart2: BlowupResult | None
    self_intersections: list
    total_divided: int

    @property
    def final(self) -> OneForm2:
        return self.steps[-1].form if self.steps else self.original

    @property
    def labels(self) -> list:
        return ["D%d" % (i + 1) for i in range(len(self.steps))]


def blowup_chain(omega: OneForm2, p: int, zname: str = "z") -> ReductionPath:
    """Blow up p times, following the singular point at the chart-1 origin.

    Before each of the first p - 1 steps continues, the divisor restriction
    of the dx-coefficient must be a monomial c*z^k with k >= 1: the strict
    transform then meets the divisor only at the chart origin and the chain
    is well defined without recentering.  The composite is cross-checked
    against the one-shot substitution v2 = v1^p z.
    """
    if p < 0:
        raise MathError("a reduction chain needs p >= 0")
    if p == 0:
        return ReductionPath(original=omega, steps=[], last_chart2=None,
                             self_intersections=[], total_divided=0)
    steps = []
    current = omega
    previous = None
    for i in range(1, p + 1):
        res = blowup_chart1(current, zname)
        if res.dicritical:
            raise MathError("dicritical component at blow-up %d; "
                            "the chain does not continue" % i)
        if i < p:
            r = res.form.a.restrict_first_zero()
            if len(r.coeffs) != 1 or r.valuation() < 1:
                raise MathError(
                    "blow-up %d leaves singular points away from the chart "
                    "origin; plain chains do not apply" % i)
        previous = current
        steps.append(res)
        current = res.form
    if _exact(omega):
        macro, k_macro = macro_chart1(omega, p, zname)
        total = sum(s.k_divided for s in steps)
        if k_macro != total or macro.a != current.a or macro.b != current.b:
            raise MathError("blow-up chain disagrees with the one-shot "
                            "substitution; internal error")
    else:
        total = sum(s.k_divided for s in steps)
    last_chart2 = blowup_chart2(previous)
    return ReductionPath(original=omega, steps=steps, last_chart2=last_chart2,
                         self_intersections=[-2] * (p - 1) + [-1],
                         total_divided=total)
