import math

import pytest
from hypothesis import given, strategies as st

from conftest import taus, xs
from theta_forge._mp import ctx, mpc, pi, I
from theta_forge.constants import eta_dedekind_product
from theta_forge.errors import ZeroDenominator
from theta_forge.modular import (ModMap, Multiplier8, char_multiplication_residual, eta_multiplier,
                                 multiplication_identity_residual, multiplier_epsilon, multiplier_exponent,
                                 multiply_argument, theta_char_reduced, theta_reduced, transform_eta,
                                 transform_theta1, transform_theta_ab, transport_char)
from theta_forge.theta import SeriesBudget, ThetaChar, char_series, theta_q

BIG = SeriesBudget(max_terms=6000)
small_x = st.builds(complex, st.floats(-0.3, 0.3), st.floats(-0.1, 0.1))


@st.composite
def maps(draw, bound=20):
    c = draw(st.integers(-bound, bound))
    d = draw(st.integers(-bound, bound))
    if math.gcd(c, d) != 1:
        c, d = 1, draw(st.integers(-bound, bound))
    sols = [a for a in range(-bound, bound + 1)
            if (c == 0 and a * d == 1) or (c != 0 and (a * d - 1) % c == 0 and abs((a * d - 1) // c) <= bound)]
    if not sols:
        return ModMap.S() @ ModMap.T(draw(st.integers(-bound, bound)))
    a = draw(st.sampled_from(sols))
    b = draw(st.integers(-bound, bound)) if c == 0 else (a * d - 1) // c
    return ModMap(a, b, c, d)


def _branch_exponent(m1, m2, tau):
    """k (mod 8) with e^{2 pi i k/8} = s sqrt(w1(m2 tau)) sqrt(w2(tau)) / sqrt(w_N(tau)).

    N is the stored representative of m1 m2 and s = +-1 the sign relating it
    to the raw matrix product; theta_1 is odd, so s enters the law directly.
    """
    n = m1 @ m2
    raw_c = m1.c * m2.a + m1.d * m2.c
    raw_d = m1.c * m2.b + m1.d * m2.d
    s = 1 if (raw_c, raw_d) == (n.c, n.d) else -1
    r = s * ctx.sqrt(m1.cocycle(m2.apply(tau))) * ctx.sqrt(m2.cocycle(tau)) / ctx.sqrt(n.cocycle(tau))
    k = int(ctx.nint(ctx.arg(r) / (pi / 4))) % 8
    assert abs(r - ctx.expjpi(ctx.mpf(k) / 4)) < 1e-15
    return k


def test_known_multipliers():
    assert multiplier_epsilon(ModMap.S()) == Multiplier8(5)
    assert multiplier_epsilon(ModMap.T(1)) == Multiplier8(1)
    assert eta_multiplier(ModMap.T(1)) == 1
    assert eta_multiplier(ModMap.S()) == 21  # sqrt(-i tau) = e^{-i pi/4} sqrt(tau)


def test_multiplier8_arithmetic():
    assert Multiplier8(11).exponent_num == 3
    assert Multiplier8(3) * Multiplier8(7) == Multiplier8(2)
    assert Multiplier8(3) ** 8 == Multiplier8(0)
    assert abs(Multiplier8(2).value - I) < 1e-28


@given(maps())
def test_eighth_roots(m):
    eps = multiplier_epsilon(m)
    assert eps ** 8 == Multiplier8(0)
    assert abs(eps.value ** 8 - 1) < 1e-25


@given(maps(), maps(), taus)
def test_composition_mod_8(m1, m2, tau):
    e12 = multiplier_epsilon(m1 @ m2).exponent_num
    e1, e2 = multiplier_epsilon(m1).exponent_num, multiplier_epsilon(m2).exponent_num
    k = _branch_exponent(m1, m2, mpc(tau))
    assert k % 2 == 0
    assert (e12 - e1 - e2 - k) % 8 == 0


@given(maps(), taus, small_x)
def test_theta1_law(m, tau, x):
    tau, x = mpc(tau), mpc(x)
    w, t2 = m.cocycle(tau), m.apply(tau)
    lhs = -char_series(1, 1, x / w, t2, budget=BIG)[0].value
    assert abs(lhs - transform_theta1(m, x, tau)) < 1e-18 * max(1, abs(lhs))


@given(maps(), taus)
def test_eta_law(m, tau):
    tau = mpc(tau)
    t2 = m.apply(tau)
    lhs = eta_dedekind_product(t2, terms=20000)
    assert abs(lhs - transform_eta(m, tau)) < 1e-18 * max(1, abs(lhs))


@given(maps(), taus, small_x, st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
def test_characteristic_law(m, tau, x, ch):
    tau, x = mpc(tau), mpc(x)
    w, t2 = m.cocycle(tau), m.apply(tau)
    v, new = transform_theta_ab(m, ch, x, tau)
    lhs = char_series(new.alpha, new.beta, x / w, t2, budget=BIG)[0].value
    assert abs(lhs - v) < 1e-18 * max(1, abs(lhs))


def test_transport_examples():
    assert transport_char(ModMap.S(), (1, 0))[0] == ThetaChar(0, 1)
    assert transport_char(ModMap.S(), (0, 0))[0] == ThetaChar(0, 0)
    assert transport_char(ModMap.T(1), (0, 0))[0] == ThetaChar(0, 1)


def test_exponent_needs_positive_c():
    with pytest.raises(ValueError):
        multiplier_exponent(ModMap.T(2))


@pytest.mark.parametrize("tau", [mpc("0.3+0.02j"), mpc("-2.7+0.011j"), mpc("0.5+0.3j"), mpc("7.1+0.05j")])
@pytest.mark.parametrize("ch", [(0, 0), (0, 1), (1, 0), (1, 1), (3, 2)])
def test_reduced_evaluation(tau, ch):
    x = mpc("0.21+0.05j")
    direct = char_series(ch[0], ch[1], x, tau, budget=SeriesBudget(max_terms=3000))[0].value
    assert abs(theta_char_reduced(ch, x, tau) - direct) < 1e-18 * max(1, abs(direct))


def test_theta_reduced_index():
    x, tau = mpc("0.21+0.05j"), mpc("0.3+0.05j")
    for k in (1, 2, 3, 4):
        assert abs(theta_reduced(k, x, tau) - ctx.jtheta(k, pi * x, ctx.expjpi(tau))) < 1e-18


@given(xs, taus, st.integers(2, 6), st.sampled_from([1, 2, 3, 4]))
def test_multiplication(x, tau, n, k):
    x = mpc(x) / n
    try:
        v = multiply_argument(k, n, x, tau)
    except ZeroDenominator:
        return
    assert abs(v - theta_q(k, n * x, tau)) < 1e-15


def test_multiplication_at_zero_denominator():
    with pytest.raises(ZeroDenominator):
        multiply_argument(1, 3, mpc("0.5"), 1j)
    with pytest.raises(ValueError):
        multiply_argument(1, 0, mpc("0.1"), 1j)
    with pytest.raises(TypeError):
        multiply_argument(1, 2.5, mpc("0.1"), 1j)


def test_multiplication_complex_n():
    x, tau = mpc("0.21+0.05j"), mpc("0.13+1.4j")
    for k in (1, 2, 3, 4):
        assert multiplication_identity_residual(k, mpc("1.5+0.25j"), x, tau) < 1e-20
    for a, b in ((0, 1), (1, 0), (1, 1)):
        assert char_multiplication_residual(a, b, mpc("1.5+0.25j"), x, tau) < 1e-20
    with pytest.raises(ValueError):
        char_multiplication_residual(0, 0, mpc("1.5+0.25j"), x, tau)
