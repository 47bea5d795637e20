"""Coefficient rings for truncated series arithmetic.

Series code never touches coefficient values directly; it goes through a
ring object that bundles arithmetic, zero tests and (partial) inversion.
Three rings are provided:

* ``RationalExact``      -- arbitrary-precision rationals, canonical form,
                            structural equality.
* ``ComplexApprox``      -- binary complex floats at a configurable mantissa
                            (default 64 bits) with relative comparison
                            tolerance ``tol`` (default 1e-9).
* ``ParamPolyRing``      -- dense polynomials over the rationals in one
                            formal parameter; units are the nonzero
                            constants.

Elements are plain values (``mpq``/``Fraction``, ``mpmath.mpc``,
``ParamPoly``), so client code can also use native operators once values
have been coerced.
"""

from __future__ import annotations

import math

import mpmath

from .errors import MathError, NotInvertibleError

try:
    from gmpy2 import mpq as _mpq

    def rational(num=0, den=None):
        """Build an exact rational from ints, strings or rational values."""
        if den is None:
            return _mpq(num)
        return _mpq(num, den)

except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Fraction

    def rational(num=0, den=None):
        if den is None:
            return _Fraction(num)
        return _Fraction(num, den)


_RATIONAL_TYPE = type(rational(0))


def is_rational(value) -> bool:
    return isinstance(value, (int, _RATIONAL_TYPE))


def rational_sqrt(q):
    """Exact square root of a rational, or None when it is not a square.

    Only nonnegative inputs can succeed; the negative case returns None so
    callers can treat "not a rational square" uniformly.
    """
    q = rational(q)
    if q < 0:
        return None
    num = int(q.numerator)
    den = int(q.denominator)
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return rational(rn, rd)


def format_rational(q) -> str:
    """Canonical text for a rational: "5", "-3/2"."""
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


class ParamPoly:
    """Dense polynomial in one formal parameter, rational coefficients.

    Trailing zero coefficients are stripped, so equal polynomials have
    equal coefficient tuples.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if is_rational(coeffs):
            coeffs = (coeffs,)
        cs = [rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def constant_value(self):
        """The value as a rational if the polynomial is constant, else None."""
        if not self.coeffs:
            return rational(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        return None

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            return other
        if is_rational(other):
            return ParamPoly((other,))
        return None

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("ParamPoly", self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ParamPoly()
        out = [rational(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return ParamPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("ParamPoly powers must be nonnegative integers")
        out = ParamPoly((1,))
        for _ in range(k):
            out = out * self
        return out

    def format(self, name: str) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(format_rational(c))
            else:
                mono = name if k == 1 else "%s^%d" % (name, k)
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(format_rational(c) + "*" + mono)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return "ParamPoly(%s)" % (self.format("t"),)


class CoefficientRing:
    """Capability bundle for coefficient arithmetic.

    Subclasses fix the element type; ``zero``/``one`` are canonical
    elements.  ``invert`` is partial and raises NotInvertibleError on
    non-units.
    """

    name = "?"

    def coerce(self, value):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.invert(b))

    def from_rational(self, q):
        raise NotImplementedError

    def as_rational(self, a):
        """Exact rational value of an element, or None when there is none."""
        return None

    def json_value(self, a):
        raise NotImplementedError

    def format_coeff(self, a) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()


class RationalExact(CoefficientRing):
    """Exact rational coefficients with canonical numerator/denominator."""

    name = "exact"

    def __init__(self):
        self.zero = rational(0)
        self.one = rational(1)

    def coerce(self, value):
        if is_rational(value):
            return rational(value)
        if isinstance(value, str):
            return rational(value)
        raise MathError("cannot interpret %r as an exact rational" % (value,))

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return a == b

    def invert(self, a):
        if a == 0:
            raise NotInvertibleError("division by zero in exact mode")
        return rational(1) / a

    def from_rational(self, q):
        return rational(q)

    def as_rational(self, a):
        return rational(a)

    def json_value(self, a):
        return "%d/%d" % (a.numerator, a.denominator)

    def format_coeff(self, a) -> str:
        return format_rational(a)


class ComplexApprox(CoefficientRing):
    """Complex floats with a configurable mantissa and comparison tolerance.

    Equality is relative: |a - b| <= tol * max(1, |a|, |b|).  All arithmetic
    runs at ``precision`` bits.
    """

    name = "float"

    def __init__(self, precision: int = 64, tol: float = 1e-9):
        if precision < 53:
            raise MathError("ComplexApprox needs at least 53 mantissa bits")
        self.precision = int(precision)
        self.tol = float(tol)
        with mpmath.workprec(self.precision):
            self.zero = mpmath.mpc(0)
            self.one = mpmath.mpc(1)

    def _key(self):
        return (self.precision, self.tol)

    def coerce(self, value):
        with mpmath.workprec(self.precision):
            if is_rational(value):
                return mpmath.mpc(mpmath.mpf(int(value.numerator)) / int(value.denominator)) \
                    if not isinstance(value, int) else mpmath.mpc(value)
            if isinstance(value, (float, complex, mpmath.mpf, mpmath.mpc)):
                return mpmath.mpc(value)
        raise MathError("cannot interpret %r as a complex coefficient" % (value,))

    def add(self, a, b):
        with mpmath.workprec(self.precision):
            return a + b

    def sub(self, a, b):
        with mpmath.workprec(self.precision):
            return a - b

    def mul(self, a, b):
        with mpmath.workprec(self.precision):
            return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def eq(self, a, b) -> bool:
        with mpmath.workprec(self.precision):
            scale = max(1.0, abs(a), abs(b))
            return abs(a - b) <= self.tol * scale

    def invert(self, a):
        if self.is_zero(a):
            raise NotInvertibleError("inverting a coefficient below tolerance")
        with mpmath.workprec(self.precision):
            return 1 / a

    def from_rational(self, q):
        with mpmath.workprec(self.precision):
            return mpmath.mpc(mpmath.mpf(int(q.numerator)) / int(q.denominator))

    def as_rational(self, a):
        return None

    def json_value(self, a):
        return [float(a.real), float(a.imag)]

    def format_coeff(self, a) -> str:
        if abs(a.imag) == 0:
            return mpmath.nstr(a.real, 17)
        imag = mpmath.nstr(a.imag, 17)
        if not imag.startswith("-"):
            imag = "+" + imag
        return "(%s%sj)" % (mpmath.nstr(a.real, 17), imag)


class ParamPolyRing(CoefficientRing):
    """Polynomials Q[param] in one named formal parameter."""

    name = "param"

    def __init__(self, param: str = "b"):
        self.param = param
        self.zero = ParamPoly()
        self.one = ParamPoly((1,))
        self.generator = ParamPoly((0, 1))

    def _key(self):
        return (self.param,)

    def coerce(self, value):
        if isinstance(value, ParamPoly):
            return value
        if is_rational(value) or isinstance(value, str):
            return ParamPoly((rational(value),))
        raise MathError("cannot interpret %r as a polynomial in %s" % (value, self.param))

    def is_zero(self, a) -> bool:
        return not a.coeffs

    def eq(self, a, b) -> bool:
        return a == b

    def invert(self, a):
        c = a.constant_value()
        if c is None:
            raise NotInvertibleError(
                "only constants are invertible in Q[%s]" % self.param)
        if c == 0:
            raise NotInvertibleError("division by zero in Q[%s]" % self.param)
        return ParamPoly((rational(1) / c,))

    def from_rational(self, q):
        return ParamPoly((q,))

    def as_rational(self, a):
        return a.constant_value()

    def json_value(self, a):
        return {"param": self.param,
                "coeffs": ["%d/%d" % (c.numerator, c.denominator) for c in a.coeffs]}

    def format_coeff(self, a) -> str:
        return a.format(self.param)
