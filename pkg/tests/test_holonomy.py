"""Formal diffeomorphism algebra, holonomy generators, numeric transport."""

import random

import mpmath
import pytest

from pdfol.errors import InputError, MathError
from pdfol.forms import OneForm2, cs_index, dual
from pdfol.holonomy import (FormalDiffeo1, VectorField1, commutes_with_scaling,
                            compose, conjugate, dichotomy, diffeo_close,
                            exp_vf, group_commutator, group_model, inverse,
                            is_identity, log_diffeo, numeric_holonomy,
                            pd_holonomy_model, periodicity, sz_lambda)
from pdfol.rings import ComplexApprox, rational
from pdfol.series import Series1, Series2

from util import QQ, fibered_model_form

CC = ComplexApprox()


def rat(n, d=1):
    return rational(n, d)


def vf(coeffs, order=10, ring=QQ):
    return VectorField1(Series1(ring, "x", order, coeffs))


def random_field(rng, order, ring=QQ):
    coeffs = {k: rat(rng.randint(-4, 4), rng.randint(1, 3))
              for k in range(2, order)}
    return VectorField1(Series1(ring, "x", order, coeffs))


def random_diffeo(rng, order, ring=QQ):
    mult = rat(rng.choice([1, -1, 2, 3]), rng.choice([1, 2]))
    tail = {k: rat(rng.randint(-3, 3), rng.randint(1, 3))
            for k in range(2, order)}
    return FormalDiffeo1(ring.coerce(mult), Series1(ring, "x", order, tail))


# ------------------------------------------------------------ exp and log


def test_exp_geometric_flow():
    # closed-form time-1 flow of x^2 d/dx is x/(1-x)
    h = exp_vf(vf({2: 1}, order=6), 6)
    assert h.series() == Series1(QQ, "x", 6, {k: 1 for k in range(1, 7)})


def test_exp_zero_field_is_identity():
    h = exp_vf(vf({}, order=8), 8)
    assert h.multiplier == rat(1)
    assert h.tail.is_zero()


def test_exp_rejects_low_valuation():
    with pytest.raises(MathError):
        vf({1: 1})


def test_flow_additivity():
    rng = random.Random(2718)
    for _ in range(5):
        Y = random_field(rng, 9)
        t = rat(rng.randint(-3, 3), rng.randint(1, 4))
        s = rat(rng.randint(-3, 3), rng.randint(1, 4))
        left = compose(exp_vf(Y.scale(t), 9), exp_vf(Y.scale(s), 9))
        right = exp_vf(Y.scale(t + s), 9)
        assert left.series() == right.series()


def test_exp_log_round_trip():
    rng = random.Random(31415)
    for _ in range(5):
        Y = random_field(rng, 9)
        back = log_diffeo(exp_vf(Y, 9), 9)
        assert back.f == Y.f


def test_log_rejects_multiplier():
    h = FormalDiffeo1.linear(QQ, "x", 8, 2)
    with pytest.raises(MathError):
        log_diffeo(h, 8)


# -------------------------------------------------------------- group ops


def test_compose_with_inverse_is_identity():
    rng = random.Random(1618)
    for _ in range(5):
        h = random_diffeo(rng, 9)
        assert is_identity(compose(h, inverse(h)))
        assert is_identity(compose(inverse(h), h))


def test_compose_multiplier_is_product():
    rng = random.Random(99)
    g = random_diffeo(rng, 8)
    h = random_diffeo(rng, 8)
    assert compose(g, h).multiplier == QQ.mul(g.multiplier, h.multiplier)


def _pushforward(Y, phi, order):
    """(phi_* Y)(x) = phi'(phi^{-1} x) * f(phi^{-1} x)."""
    g = inverse(phi).series()
    der = phi.series().derive()
    der = Series1._raw(der.ring, der.variable, order, dict(der.coeffs),
                       der.truncated)
    return VectorField1((der.compose(g) * Y.f.compose(g)).truncate(order))


def test_conjugation_naturality():
    rng = random.Random(8128)
    for _ in range(4):
        Y = random_field(rng, 8)
        phi = random_diffeo(rng, 8)
        left = conjugate(exp_vf(Y, 8), phi)
        right = exp_vf(_pushforward(Y, phi, 8), 8)
        assert left.series() == right.series()


def test_scaling_commutes_with_model_exp():
    h = pd_holonomy_model(6, 13)
    tangent = FormalDiffeo1(CC.coerce(1),
                            h.tail.scale(CC.invert(h.multiplier)))
    mu = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi) / 6)
    left = compose(FormalDiffeo1.linear(CC, "x", 13, mu), tangent)
    right = compose(tangent, FormalDiffeo1.linear(CC, "x", 13, mu))
    assert diffeo_close(left, right)


# ------------------------------------------------------------ model + ODE


def test_pd_model_m2_series():
    h = pd_holonomy_model(2, 3)
    s = h.series()
    assert abs(mpmath.mpc(h.multiplier) + 1) < 1e-15
    assert abs(mpmath.mpc(s.coefficient(1)) + 1) < 1e-15
    assert abs(mpmath.mpc(s.coefficient(2))) < 1e-15
    assert abs(mpmath.mpc(s.coefficient(3)) - mpmath.mpc(0, mpmath.pi / 2)) < 1e-15


def test_pd_model_multiplier_is_root_of_unity():
    for m in (2, 3, 5, 6):
        h = pd_holonomy_model(m, 6)
        assert abs(mpmath.mpc(h.multiplier) ** m - 1) <= 1e-12


def test_formal_vs_numeric_transport():
    for m in (2, 3):
        omega = fibered_model_form(m, 1, order=20)
        formal = pd_holonomy_model(m, 14)
        for x0 in (0.05, 0.03):
            end, = numeric_holonomy(omega, 0, 1.0, [x0])
            assert abs(end - formal.evaluate(x0)) < 1e-6


def test_trivial_foliations_have_identity_holonomy():
    variables = ("x", "z")
    # leaves x = const: the divisor itself is a leaf, nothing moves
    omega_dx = OneForm2(Series2(QQ, variables, 6, {(0, 0): 1}),
                        Series2.zero(QQ, variables, 6))
    for x0, end in zip([0.05, 0.2], numeric_holonomy(omega_dx, 0, 1.0,
                                                     [0.05, 0.2])):
        assert abs(end - x0) < 1e-9
    # leaves z = const, looped in their own coordinate via the swap
    omega_dz = OneForm2(Series2.zero(QQ, variables, 6),
                        Series2(QQ, variables, 6, {(0, 0): 1}))
    for x0, end in zip([0.05, 0.2],
                       numeric_holonomy(omega_dz.swapped(), 0, 1.0,
                                        [0.05, 0.2])):
        assert abs(end - x0) < 1e-9


def test_corner_multiplier_matches_index():
    # 2z dx + x dz: linearizable corner, index -1/2, multiplier
    # e^{2*pi*i*(-1/2)} = -1 at every radius since the lift is linear
    variables = ("x", "z")
    omega = OneForm2(Series2(QQ, variables, 8, {(0, 1): 2}),
                     Series2(QQ, variables, 8, {(1, 0): 1}))
    index = cs_index(dual(omega), QQ.coerce(0))
    assert index == rat(-1, 2)
    target = mpmath.exp(2j * mpmath.pi * mpmath.mpf(-0.5))
    for x0 in (0.01, 0.001):
        end, = numeric_holonomy(omega, 0, 1.0, [x0])
        assert abs(end / x0 - target) < 1e-8


def test_numeric_holonomy_rejects_singular_loop():
    omega = fibered_model_form(2, 1, order=12)
    with pytest.raises(MathError):
        numeric_holonomy(omega, 1.0, 1.0, [0.05])  # circle through z = 0
    zero_a = OneForm2(Series2.zero(QQ, ("x", "z"), 6),
                      Series2(QQ, ("x", "z"), 6, {(0, 0): 1}))
    with pytest.raises(MathError):
        numeric_holonomy(zero_a, 0, 1.0, [0.05])
    with pytest.raises(InputError):
        numeric_holonomy(omega, 0, -1.0, [0.05])


# ------------------------------------------------------------ group model


def model_field(m, N):
    h = pd_holonomy_model(m, N)
    tangent = FormalDiffeo1(CC.coerce(1),
                            h.tail.scale(CC.invert(h.multiplier)))
    return log_diffeo(tangent, N)


def test_group_model_multipliers():
    gm = group_model(2, 6, model_field(6, 13), 13)
    e = lambda t: mpmath.exp(mpmath.mpc(0, mpmath.pi) * t)
    assert abs(mpmath.mpc(gm.h1.multiplier) - e(mpmath.mpf(1) / 3)) < 1e-12
    assert abs(mpmath.mpc(gm.h2.multiplier) - e(1) / e(mpmath.mpf(1) / 3)) < 1e-12
    assert abs(mpmath.mpc(gm.mu) ** 6 - 1) < 1e-12
    assert abs(mpmath.mpc(gm.lam) ** 2 - 1) < 1e-12


def test_group_model_h2_from_h0():
    gm = group_model(2, 6, model_field(6, 13), 13)
    h0 = FormalDiffeo1.linear(CC, "x", 13, gm.lam)
    assert diffeo_close(compose(h0, inverse(gm.h1)), gm.h2)


def test_group_model_zero_field():
    gm = group_model(2, 6, VectorField1(Series1.zero(CC, "x", 10)), 10)
    assert gm.h1.tail.is_zero() and gm.h2.tail.is_zero()


def test_group_model_rejects_wrong_valuation():
    with pytest.raises(MathError):
        group_model(2, 6, VectorField1(Series1(CC, "x", 10, {3: 1})), 10)


def test_dichotomy_and_lambda_pair():
    assert dichotomy(2, 6) == "Abelian"
    assert dichotomy(3, 2) == "NonSolvable"
    assert dichotomy(4, 12) == "Abelian"
    assert sz_lambda(2, 6) == (rat(1, 4), rat(4), True)
    assert sz_lambda(3, 2) == (rat(3, 5), rat(5, 3), False)
    assert sz_lambda(4, 12) == (rat(1, 4), rat(4), True)
    with pytest.raises(InputError):
        dichotomy(1, 6)


def test_commutes_with_scaling_model_field():
    h = pd_holonomy_model(4, 13)
    tangent = FormalDiffeo1(CC.coerce(1),
                            h.tail.scale(CC.invert(h.multiplier)))
    for k in range(1, 4):
        alpha = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi) * k / 4)
        assert commutes_with_scaling(tangent, alpha)
    assert not commutes_with_scaling(tangent, 2)
    eighth = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi) / 8)
    assert not commutes_with_scaling(tangent, eighth)


def test_periodicity():
    assert periodicity(FormalDiffeo1.linear(CC, "x", 8, -1), 2)
    third = mpmath.exp(mpmath.mpc(0, 2 * mpmath.pi) / 3)
    assert periodicity(FormalDiffeo1.linear(CC, "x", 8, third), 3)
    assert not periodicity(FormalDiffeo1.linear(CC, "x", 8, third), 2)
    h = pd_holonomy_model(2, 9)
    tangent = FormalDiffeo1(CC.coerce(1),
                            h.tail.scale(CC.invert(h.multiplier)))
    assert not periodicity(tangent, 2)


def test_commutator_dichotomy():
    gm = group_model(2, 6, model_field(6, 12), 12)
    assert abs(mpmath.mpc(gm.lam) ** 6 - 1) < 1e-12
    assert is_identity(group_commutator(gm.h1, gm.h2))
    gm = group_model(3, 2, model_field(2, 12), 12)
    assert not is_identity(group_commutator(gm.h1, gm.h2))
