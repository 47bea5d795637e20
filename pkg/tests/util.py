"""Builders for the worked examples shared across test modules."""

from pdfol.forms import OneForm2
from pdfol.rings import RationalExact, rational
from pdfol.series import Series2

QQ = RationalExact()


def poly(order, coeffs, ring=QQ, variables=("x", "y")):
    return Series2(ring, variables, order, coeffs)


def takens_form(p, n, alpha, unit_tail=(), ring=QQ, order=None):
    """d(y^2 + x^n) + alpha*x^p*U(x) dy with U = 1 + sum unit_tail[k] x^(k+1)."""
    order = order or (2 * n + 4)
    a = poly(order, {(n - 1, 0): n}, ring)
    b_coeffs = {(0, 1): 2, (p, 0): ring.coerce(alpha)}
    for k, c in enumerate(unit_tail):
        b_coeffs[(p + k + 1, 0)] = ring.mul(ring.coerce(alpha), ring.coerce(c))
    return OneForm2(a, poly(order, b_coeffs, ring))


def expected_final(p, alpha, unit_tail, ring=QQ, order=40):
    """The exceptional-chart form after p blow-ups of the 2p = n family:
    p(2(z^2+1) + alpha z U(x)) dx + x(2z + alpha U(x)) dz."""
    alpha = ring.coerce(alpha)
    pc = ring.coerce(p)
    a = {(0, 2): ring.mul(pc, ring.coerce(2)),
         (0, 0): ring.mul(pc, ring.coerce(2)),
         (0, 1): ring.mul(pc, alpha)}
    b = {(1, 1): ring.coerce(2), (1, 0): alpha}
    for k, c in enumerate(unit_tail):
        scaled = ring.mul(alpha, ring.coerce(c))
        a[(k + 1, 1)] = ring.mul(pc, scaled)
        b[(k + 2, 0)] = scaled
    return OneForm2(Series2(ring, ("x", "z"), order, a),
                    Series2(ring, ("x", "z"), order, b))


def fibered_model_form(m, a_coeff, order=24, ring=QQ):
    """x dz - (m z + a_coeff x^m) dx."""
    a = {(0, 1): ring.coerce(-m)}
    if not ring.is_zero(ring.coerce(a_coeff)):
        a[(m, 0)] = ring.neg(ring.coerce(a_coeff))
    return OneForm2(Series2(ring, ("x", "z"), order, a),
                    Series2(ring, ("x", "z"), order, {(1, 0): 1}))
