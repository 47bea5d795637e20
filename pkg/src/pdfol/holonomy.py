"""Formal one-dimensional diffeomorphisms and holonomy generators.

The projective holonomy of the divisor component carrying the
Poincare-Dulac point is generated by mu*exp(Y) and (lambda/mu)*exp(-Y)
where Y is a vector field vanishing to order m + 1 and mu^m = 1,
lambda^p = 1.  This module supplies the formal side (Lie-series
exponential and logarithm, composition, inversion, conjugation, the
closed-form model generator) and a numeric oracle that transports a
transversal coordinate around a divisor loop by integrating the
leaf-lift ODE.

Loop convention: the divisor is the zero set of the first variable, the
loop runs in the second variable, and the first coordinate is
transported.  Pass ``omega.swapped()`` to loop in the first variable.
"""

import cmath
from dataclasses import dataclass

import mpmath
from scipy.integrate import solve_ivp

from .errors import InputError, MathError, PrecisionError
from .forms import OneForm2
from .rings import ComplexApprox, rational
from .series import INF, Series1


@dataclass(frozen=True)
class VectorField1:
    """f(x) * d/dx with f vanishing to order at least 2."""
    f: Series1

    def __post_init__(self):
        if self.f.valuation() < 2:
            raise MathError("flow field must vanish to order >= 2")

    @property
    def ring(self):
        return self.f.ring

    @property
    def variable(self):
        return self.f.variable

    def scale(self, value) -> "VectorField1":
        return VectorField1(self.f.scale(self.ring.coerce(value)))

    def __neg__(self) -> "VectorField1":
        return VectorField1(-self.f)


@dataclass(frozen=True)
class FormalDiffeo1:
    """h(x) = multiplier*x + tail(x) with tail vanishing to order >= 2."""
    multiplier: object
    tail: Series1

    def __post_init__(self):
        if self.tail.ring.is_zero(self.multiplier):
            raise MathError("a formal diffeomorphism needs a nonzero "
                            "multiplier")
        if self.tail.valuation() < 2:
            raise MathError("diffeomorphism tail must vanish to order >= 2")

    @property
    def ring(self):
        return self.tail.ring

    @property
    def variable(self):
        return self.tail.variable

    @property
    def order(self):
        return self.tail.order

    def series(self) -> Series1:
        x = Series1.monomial(self.ring, self.variable, self.order, 1)
        return x.scale(self.multiplier) + self.tail

    @classmethod
    def from_series(cls, s: Series1) -> "FormalDiffeo1":
        ring = s.ring
        if not ring.is_zero(s.coefficient(0)):
            raise MathError("a diffeomorphism fixing 0 cannot have a "
                            "constant term")
        lam = s.coefficient(1)
        x = Series1.monomial(ring, s.variable, s.order, 1)
        return cls(lam, s - x.scale(lam))

    @classmethod
    def identity(cls, ring, variable: str, order: int) -> "FormalDiffeo1":
        return cls(ring.coerce(1), Series1.zero(ring, variable, order))

    @classmethod
    def linear(cls, ring, variable: str, order: int,
               value) -> "FormalDiffeo1":
        return cls(ring.coerce(value), Series1.zero(ring, variable, order))

    def evaluate(self, x0):
        """Numeric value of the truncated series at x0."""
        with mpmath.workprec(getattr(self.ring, "precision", 64)):
            xv = mpmath.mpc(x0)
            acc = mpmath.mpc(0)
            for k, c in self.series().coeffs.items():
                acc += mpmath.mpc(c) * xv ** k
            return acc

    def format(self) -> str:
        return self.series().format()


def _apply_vf(f: Series1, g: Series1, order: int) -> Series1:
    """f * g' with the order restored to ``order``.

    The generic product rule would cap the order at order - 1 because of
    the derivative, but val(f) >= 2 shifts every term of g' up by at
    least 2, so all coefficients of f*g' up to ``order`` are determined
    by coefficients of g up to ``order``."""
    der = g.derive()
    der = Series1._raw(der.ring, der.variable, order, dict(der.coeffs),
                       der.truncated)
    prod = f * der
    acc = {k: c for k, c in prod.coeffs.items() if k <= order}
    return Series1._raw(f.ring, f.variable, order,
                        acc, f.truncated or g.truncated)


def exp_vf(Y: VectorField1, N: int) -> FormalDiffeo1:
    """Time-1 flow of Y as the Lie series sum_k Y^k(id)/k!.

    Each application of Y raises the valuation, so the sum is finite at
    any truncation order."""
    f = Y.f
    ring = f.ring
    if f.truncated and f.order < N:
        raise PrecisionError("flow field known only to order %d < N = %d"
                             % (f.order, N))
    x = Series1.monomial(ring, f.variable, N, 1)
    total = x
    term = x
    k = 1
    while not term.is_zero() and k <= N:
        term = _apply_vf(f, term, N).scale(ring.coerce(rational(1, k)))
        total = total + term
        k += 1
    return FormalDiffeo1(ring.coerce(1), total - x)


def log_diffeo(h: FormalDiffeo1, N: int) -> VectorField1:
    """The vector field Y with exp_vf(Y, N) = h to order N.

    Only tangent-to-identity maps have a logarithm in this chart; the
    field is recovered degree by degree since adding c*x^d to Y changes
    the flow by c*x^d plus higher-order terms."""
    ring = h.ring
    if not ring.eq(h.multiplier, ring.coerce(1)):
        raise MathError("logarithm needs multiplier 1")
    if h.tail.truncated and h.tail.order < N:
        raise PrecisionError("diffeomorphism known only to order %d < N = %d"
                             % (h.tail.order, N))
    variable = h.variable
    target = h.series().truncate(N) if h.order > N else h.series()
    f = Series1.zero(ring, variable, N)
    for d in range(2, N + 1):
        current = exp_vf(VectorField1(f), N).series()
        c = (target - current).coefficient(d)
        if not ring.is_zero(c):
            f = f + Series1.monomial(ring, variable, N, d, c)
    return VectorField1(f)


def compose(outer: FormalDiffeo1, inner: FormalDiffeo1) -> FormalDiffeo1:
    return FormalDiffeo1.from_series(outer.series().compose(inner.series()))


def inverse(h: FormalDiffeo1) -> FormalDiffeo1:
    return FormalDiffeo1.from_series(h.series().reversion())


def conjugate(g: FormalDiffeo1, h: FormalDiffeo1) -> FormalDiffeo1:
    """h o g o h^{-1}."""
    return compose(compose(h, g), inverse(h))


def group_commutator(g: FormalDiffeo1, h: FormalDiffeo1) -> FormalDiffeo1:
    """g o h o g^{-1} o h^{-1}."""
    return compose(compose(g, h), compose(inverse(g), inverse(h)))


def _series_close(s1: Series1, s2: Series1) -> bool:
    """Coefficientwise comparison, tolerance scaled by magnitude."""
    ring = s1.ring
    tol = getattr(ring, "tol", None)
    if tol is None:
        return s1 == s2
    order = min(s1.order, s2.order)
    keys = {k for k in set(s1.coeffs) | set(s2.coeffs) if k <= order}
    scale = max([1.0] + [abs(mpmath.mpc(s1.coefficient(k))) for k in keys]
                + [abs(mpmath.mpc(s2.coefficient(k))) for k in keys])
    return all(abs(mpmath.mpc(s1.coefficient(k)) - mpmath.mpc(s2.coefficient(k)))
               <= tol * scale for k in keys)


def diffeo_close(h: FormalDiffeo1, g: FormalDiffeo1) -> bool:
    return _series_close(h.series(), g.series())


def is_identity(h: FormalDiffeo1) -> bool:
    ident = FormalDiffeo1.identity(h.ring, h.variable, h.order)
    return diffeo_close(h, ident)


def pd_holonomy_model(m: int, N: int, ring=None) -> FormalDiffeo1:
    """Holonomy of x dz - (mz + x^m) dx around the divisor loop:
    e^{2*pi*i/m} * exp(-(2*pi*i/m) * x^{m+1}/(m + x^m) * d/dx)."""
    if m < 2:
        raise InputError("the model needs m >= 2")
    if ring is None:
        ring = ComplexApprox()
    variable = "x"
    with mpmath.workprec(ring.precision):
        coeff = mpmath.mpc(0, 2 * mpmath.pi) / m
        mu = mpmath.exp(coeff)
    den = Series1(ring, variable, N, {0: m, m: 1})
    shift = Series1.monomial(ring, variable, N, m + 1)
    field = (den.inverse_unit() * shift).scale(ring.neg(ring.coerce(coeff)))
    flow = exp_vf(VectorField1(field), N)
    return FormalDiffeo1(ring.coerce(mu), flow.tail.scale(ring.coerce(mu)))


def _to_complex(c):
    if isinstance(c, (int, float, complex)):
        return complex(c)
    if isinstance(c, (mpmath.mpf, mpmath.mpc)):
        return complex(c)
    num = getattr(c, "numerator", None)
    if num is not None:
        return complex(int(num) / int(c.denominator))
    raise MathError("cannot transport coefficients of type %s"
                    % type(c).__name__)


def _eval2(terms, xv, zv):
    return sum(c * xv ** i * zv ** j for i, j, c in terms)


def numeric_holonomy(omega: OneForm2, center, radius, samples,
                     rtol: float = 1e-10):
    """Transport sample transversal points around the divisor loop.

    The loop is the circle of the given radius around ``center`` in the
    second variable; for every x0 in ``samples`` the leaf-lift ODE
    dx/dz = -b(x, z)/a(x, z) is integrated once around with an adaptive
    high-order Runge-Kutta pair.  Returns the end values.
    """
    a_terms = [(i, j, _to_complex(c)) for (i, j), c in omega.a.coeffs.items()]
    b_terms = [(i, j, _to_complex(c)) for (i, j), c in omega.b.coeffs.items()]
    if not a_terms:
        raise MathError("the dx-coefficient vanishes identically; the "
                        "transversal fibration degenerates along the loop")
    c0 = _to_complex(center)
    r = float(radius)
    if r <= 0:
        raise InputError("loop radius must be positive")

    restriction = omega.a.restrict_first_zero()
    if not restriction.is_zero():
        rest_terms = [(0, j, _to_complex(c))
                      for j, c in restriction.coeffs.items()]
        scale = max(abs(c) for _, _, c in rest_terms)
        for k in range(360):
            z = c0 + r * cmath.exp(2j * cmath.pi * k / 360)
            if abs(_eval2(rest_terms, 0.0, z)) <= 1e-9 * scale:
                raise MathError("loop passes through or too close to a "
                                "divisor singularity near z = %s" % z)

    two_pi_i = 2j * cmath.pi

    def rhs(t, y):
        z = c0 + r * cmath.exp(two_pi_i * t)
        dz = two_pi_i * r * cmath.exp(two_pi_i * t)
        xv = complex(y[0], y[1])
        av = _eval2(a_terms, xv, z)
        if av == 0:
            raise MathError("leaf lift hit a zero of the dx-coefficient")
        value = -(_eval2(b_terms, xv, z) / av) * dz
        return [value.real, value.imag]

    results = []
    for x0 in samples:
        start = _to_complex(x0)
        sol = solve_ivp(rhs, (0.0, 1.0), [start.real, start.imag],
                        method="DOP853", rtol=rtol,
                        atol=1e-14 * max(1.0, abs(start)), max_step=0.05)
        if not sol.success:
            raise MathError("holonomy transport failed: %s" % sol.message)
        results.append(mpmath.mpc(sol.y[0, -1], sol.y[1, -1]))
    return results


@dataclass(frozen=True)
class HolonomyGroupModel:
    """H = <mu*exp(Y), (lambda/mu)*exp(-Y)> with mu^m = 1, lambda^p = 1."""
    p: int
    m: int
    mu: object
    lam: object
    Y: VectorField1
    h1: FormalDiffeo1
    h2: FormalDiffeo1


def group_model(p: int, m: int, Y: VectorField1, N: int,
                mu=None, lam=None) -> HolonomyGroupModel:
    """Build both generators from the vanishing-order-(m+1) field Y."""
    if p < 2 or m < 2:
        raise InputError("group model needs p >= 2 and m >= 2")
    v = Y.f.valuation()
    if v is not INF and v != m + 1:
        raise MathError("model field must vanish to order exactly m + 1 "
                        "(got valuation %s)" % v)
    ring = Y.ring
    with mpmath.workprec(getattr(ring, "precision", 64)):
        if mu is None:
            mu = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi) / m)
        if lam is None:
            lam = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi) / p)
    mu = ring.coerce(mu)
    lam = ring.coerce(lam)
    tol = getattr(ring, "tol", 1e-9)
    with mpmath.workprec(getattr(ring, "precision", 64)):
        if abs(mpmath.mpc(mu) ** m - 1) > tol:
            raise MathError("mu is not an m-th root of unity")
        if abs(mpmath.mpc(lam) ** p - 1) > tol:
            raise MathError("lambda is not a p-th root of unity")
    plus = exp_vf(Y, N)
    minus = exp_vf(-Y, N)
    ratio = ring.div(lam, mu)
    h1 = FormalDiffeo1(mu, plus.tail.scale(mu))
    h2 = FormalDiffeo1(ratio, minus.tail.scale(ratio))
    return HolonomyGroupModel(p, m, mu, lam, Y, h1, h2)


def dichotomy(p: int, m: int) -> str:
    """Abelian when p divides m, non-solvable otherwise."""
    if p < 2 or m < 2:
        raise InputError("dichotomy needs p >= 2 and m >= 2")
    return "Abelian" if m % p == 0 else "NonSolvable"


def sz_lambda(p: int, m: int):
    """The two resonance weights p/(m+p) and (m+p)/p, plus an integer
    flag for the second; the flag holds exactly when p divides m."""
    if p < 2 or m < 2:
        raise InputError("sz_lambda needs p >= 2 and m >= 2")
    small = rational(p, m + p)
    large = rational(m + p, p)
    integer = large.denominator == 1
    assert integer == (m % p == 0)
    return small, large, integer


def commutes_with_scaling(h: FormalDiffeo1, alpha, N: int = None) -> bool:
    """alpha*h(x) == h(alpha*x) coefficientwise within tolerance."""
    ring = h.ring
    alpha = ring.coerce(alpha)
    s = h.series()
    if N is not None:
        s = s.truncate(N)
    left = s.scale(alpha)
    scaled_x = Series1.monomial(ring, h.variable, s.order, 1, alpha)
    right = s.compose(scaled_x)
    return _series_close(left, right)


def periodicity(h: FormalDiffeo1, q: int, N: int = None) -> bool:
    """Is the q-fold composition of h the identity to order N?"""
    if q < 1:
        raise InputError("periodicity needs q >= 1")
    acc = h
    for _ in range(q - 1):
        acc = compose(acc, h)
    if N is not None and acc.order > N:
        acc = FormalDiffeo1(acc.multiplier, acc.tail.truncate(N))
    return is_identity(acc)
