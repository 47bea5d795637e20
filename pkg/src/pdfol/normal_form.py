"""Fibered normal form at a Poincare-Dulac candidate.

The model field is X = x d/dx + (m z + a(x,z)) d/dz with nu(a) >= 2.
Conjugating by a fibered transform z -> z + phi(x,z) changes the tail a
into

    b = x*phi_x(x,psi) + (1 + phi_z(x,psi))*(m*psi + a(x,psi)) - m*z

where psi is the inverse fiber coordinate, the fixpoint of
psi = z - phi(x,psi).  Degree by degree, every tail monomial x^i z^j can
be removed except (i,j) = (m,0), whose divisor i + m(j-1) vanishes; the
surviving coefficient epsilon distinguishes a genuine Poincare-Dulac
singularity (epsilon != 0) from one that is dicritical to the computed
order.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import MathError, PrecisionError
from .forms import OneForm2
from .rings import rational
from .series import Series2


@dataclass(frozen=True)
class FiberedField:
    """x d/dx + (m z + a(x,z)) d/dz with nu(a) >= 2."""

    m: int
    a: Series2

    def __post_init__(self):
        if self.m < 2:
            raise MathError("fibered model needs m >= 2")
        v = self.a.valuation()
        if v < 2:
            raise MathError("fibered tail must have valuation >= 2")

    @property
    def ring(self):
        return self.a.ring

    @property
    def variables(self):
        return self.a.variables


def to_fibered_field(omega: OneForm2, m: int, order: int | None = None) -> FiberedField:
    """Put a 1-form with a Poincare-Dulac candidate at the origin into the
    fibered model.

    The dz-coefficient must be x*(unit); dividing the dual field by the
    unit makes the first component exactly x, forcing the z-linear slope
    of the second component to be exactly m.  A shear z -> z + c*x then
    removes the x-linear term (its divisor is m - 1 != 0)."""
    ring = omega.ring
    if order is None:
        order = omega.order - 1
    # dividing the dz-coefficient by its x factor costs one order; work
    # one higher internally so the tail is complete to the order requested
    a_t = omega.a.truncate(order + 1)
    b_t = omega.b.truncate(order + 1)
    if b_t.is_zero() or b_t.min_exponent(0) < 1:
        raise MathError("dz-coefficient is not of the form x*(unit)")
    unit = b_t.divide_monomial((1, 0))
    if ring.is_zero(unit.coefficient(0, 0)):
        raise MathError("dz-coefficient is not of the form x*(unit)")
    q = (-a_t) * unit.inverse_unit()
    if not ring.is_zero(q.coefficient(0, 0)):
        raise MathError("the origin is not singular")
    if not ring.eq(q.coefficient(0, 1), ring.coerce(m)):
        raise MathError("z-linear slope differs from m = %d" % m)
    q10 = q.coefficient(1, 0)
    variables = omega.variables
    if not ring.is_zero(q10):
        gamma = ring.mul(q10, ring.coerce(rational(1, m - 1)))
        ex = Series2(ring, variables, order, {(1, 0): 1})
        ey = Series2(ring, variables, order,
                     {(0, 1): 1, (1, 0): ring.neg(gamma)})
        q = q.substitute(ex, ey) + Series2.monomial(ring, variables, order,
                                                    (1, 0), gamma)
    tail = q - Series2.monomial(ring, variables, order, (0, 1), ring.coerce(m))
    return FiberedField(m, tail)


def homological_step(a_k: Series2, m: int, k: int):
    """Solve (i + m(j-1))*phi_ij = -a_ij on the degree-k slice.

    Returns (phi_k, b_k): b_k collects the monomials whose divisor
    vanishes and therefore cannot be removed; for k = m that is exactly
    the x^m term."""
    ring = a_k.ring
    phi = {}
    kept = {}
    for (i, j), c in a_k.coeffs.items():
        if i + j != k:
            raise MathError("homological step expects a homogeneous slice")
        div = i + m * (j - 1)
        if div == 0:
            kept[(i, j)] = c
        else:
            phi[(i, j)] = ring.mul(c, ring.coerce(rational(-1, div)))
    return (Series2(ring, a_k.variables, k, phi),
            Series2(ring, a_k.variables, k, kept))


def _x_dx(phi: Series2, order: int) -> Series2:
    ring = phi.ring
    acc = {(i, j): ring.mul(c, ring.coerce(i))
           for (i, j), c in phi.coeffs.items() if i}
    return Series2(ring, phi.variables, order, acc, truncated=phi.truncated)


def _dz(phi: Series2, order: int) -> Series2:
    ring = phi.ring
    acc = {(i, j - 1): ring.mul(c, ring.coerce(j))
           for (i, j), c in phi.coeffs.items() if j}
    return Series2(ring, phi.variables, order, acc, truncated=phi.truncated)


def _at_order(s: Series2, order: int) -> Series2:
    if s.truncated and s.order < order:
        raise PrecisionError("series data ends before the requested order")
    return Series2(s.ring, s.variables, order, s.coeffs, truncated=s.truncated)


def invert_fiber(phi: Series2, order: int) -> Series2:
    """The fixpoint psi = z - phi(x, psi), i.e. the inverse of the fiber
    map z -> z + phi(x,z) with x frozen."""
    ring = phi.ring
    variables = phi.variables
    ex = Series2(ring, variables, order, {(1, 0): 1})
    psi = Series2(ring, variables, order, {(0, 1): 1})
    z = psi
    for _ in range(2 * order + 2):
        nxt = z - phi.substitute(ex, psi)
        if nxt == psi:
            return nxt
        psi = nxt
    raise MathError("fiber inversion did not stabilize")


def apply_fibered(m: int, a: Series2, phi: Series2, order: int) -> Series2:
    """Tail of the field transported through z -> z + phi(x,z)."""
    ring = a.ring
    variables = a.variables
    phi = _at_order(phi, order)
    if phi.valuation() < 2:
        raise MathError("fibered transforms need valuation >= 2")
    psi = invert_fiber(phi, order)
    ex = Series2(ring, variables, order, {(1, 0): 1})
    z = Series2(ring, variables, order, {(0, 1): 1})
    cache = {}
    a_at = _at_order(a, order).substitute(ex, psi, cache)
    xphix_at = _x_dx(phi, order).substitute(ex, psi, cache)
    phiz_at = _dz(phi, order).substitute(ex, psi, cache)
    one = Series2.constant(ring, variables, order, 1)
    flow = psi.scale(ring.coerce(m)) + a_at
    return xphix_at + (one + phiz_at) * flow - z.scale(ring.coerce(m))


def _max_abs(series: Series2) -> float:
    return max((abs(mpmath.mpc(c)) for c in series.coeffs.values()),
               default=0.0)


def _floor_small(series: Series2, scale) -> Series2:
    """Drop coefficients below tol*scale in approximate rings.

    Clearing a degree produces differences of products of slice
    coefficients, so roundoff there is proportional to the square of the
    largest operand, not to 1; exact rings pass through untouched."""
    tol = getattr(series.ring, "tol", None)
    if tol is None or not series.coeffs:
        return series
    bound = tol * max(1.0, scale)
    acc = {key: c for key, c in series.coeffs.items()
           if abs(mpmath.mpc(c)) > bound}
    return Series2._raw(series.ring, series.variables, series.order, acc,
                        series.truncated)


@dataclass(frozen=True)
class NormalizationResult:
    m: int
    epsilon: object
    transform: Series2          # z -> z + transform(x, z)
    order: int
    residual_valuation: object  # > order; may be INF

    def model_tail(self) -> Series2:
        return Series2.monomial(self.transform.ring, self.transform.variables,
                                self.order, (self.m, 0), self.epsilon)


def normalize(X: FiberedField, N: int) -> NormalizationResult:
    """Eliminate the tail degree by degree up to N, keeping the single
    obstructed coefficient epsilon at x^m.

    After each degree the full nonlinear transport is recomputed, so the
    cross terms of the conjugation identity are honored rather than just
    the homogeneous slice.  The result is checked by an independent
    substitution before it is returned."""
    ring = X.ring
    m = X.m
    if N < m:
        raise PrecisionError("order %d cannot reach the obstruction at "
                             "degree m = %d" % (N, m))
    if X.a.truncated and X.a.order < N:
        raise PrecisionError("input known only to order %d < N = %d"
                             % (X.a.order, N))
    variables = X.variables
    a_cur = X.a.truncate(N)
    ex = Series2(ring, variables, N, {(1, 0): 1})
    z = Series2(ring, variables, N, {(0, 1): 1})
    total = Series2.zero(ring, variables, N)
    epsilon = ring.coerce(0)
    for k in range(2, N + 1):
        a_k = a_cur.homogeneous_part(k)
        if a_k.is_zero():
            continue
        phi_k, kept = homological_step(a_k, m, k)
        if k == m:
            epsilon = a_cur.coefficient(m, 0)
        elif not kept.is_zero():
            raise MathError("unexpected obstruction outside degree m")
        if phi_k.is_zero():
            continue
        scale = 1.0
        if getattr(ring, "tol", None) is not None:
            scale = max(1.0, _max_abs(a_cur), _max_abs(phi_k)) ** 2
        a_cur = apply_fibered(m, a_cur, phi_k, N)
        cleared = a_cur.homogeneous_part(k) - _at_order(kept, N).truncate(N)
        if not _floor_small(cleared, scale).is_zero():
            raise MathError("homological step failed to clear its degree")
        total = total + _at_order(phi_k, N).substitute(ex, z + total)
    residual = verify_conjugation(X, total, m, epsilon, N)
    if not residual > N:
        raise MathError("conjugation verification failed: residual "
                        "valuation %s <= N" % residual)
    return NormalizationResult(m=m, epsilon=epsilon, transform=total,
                               order=N, residual_valuation=residual)


def verify_conjugation(X: FiberedField, transform: Series2, m: int, epsilon,
                       N: int):
    """Valuation of (transported tail) - epsilon*x^m, by direct
    substitution; a correct normalization to order N makes it exceed N."""
    ring = X.ring
    if transform.is_zero():
        moved = X.a.truncate(N)
    else:
        moved = apply_fibered(m, X.a.truncate(N), transform, N)
    model = Series2.monomial(ring, X.variables, N, (m, 0), epsilon)
    scale = 1.0
    if getattr(ring, "tol", None) is not None:
        scale = max(1.0, _max_abs(X.a), _max_abs(transform)) ** 2
    return _floor_small(moved - model, scale).valuation()


def bound_bruteforce(m: int, R: int):
    """max of j/(i + m(j-1)) over i, j >= 0 with m+1 <= i+j <= R.

    Every divisor in the scan region is a positive integer, so the
    comparison is exact integer cross-multiplication."""
    if m < 2 or R < m + 1:
        raise MathError("need m >= 2 and R >= m + 1")
    best_n, best_d = 0, 1
    for k in range(m + 1, R + 1):
        for j in range(k + 1):
            i = k - j
            div = i + m * (j - 1)
            if div <= 0:
                raise MathError("nonpositive divisor in scan region")
            if j * best_d > best_n * div:
                best_n, best_d = j, div
    return rational(best_n, best_d)
