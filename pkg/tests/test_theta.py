import pytest
from hypothesis import given

from conftest import taus, xs
from theta_forge._mp import ctx, mpc, pi, I
from theta_forge.errors import TailNotConverged
from theta_forge.theta import (SeriesBudget, ThetaChar, UHTau, char_series, reduce_x, shift_half_periods,
                               theta_bounded, theta_char_q, theta_const_dx_shifted, theta_derivs,
                               theta_dx_q, theta_dx_shifted, theta_q)

# mpmath.jtheta(k, pi x, exp(pi i tau)) at x = 0.23+0.11i, tau = 0.3+1.1i
JTHETA = {
    1: mpc("0.522818478939038867081663+0.353485121982618790262941j"),
    2: mpc("0.698947817750753213735466-0.034752402010703214192757j"),
    3: mpc("1.04368370470197720931848-0.0195229538457655360811903j"),
    4: mpc("0.956321799692012656334356+0.0195292309456726243265833j"),
}
X0, TAU0 = mpc("0.23+0.11j"), mpc("0.3+1.1j")


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_frozen_values(k):
    assert abs(theta_q(k, X0, TAU0) - JTHETA[k]) < 1e-20


def test_theta3_at_i():
    # pi^(1/4) / Gamma(3/4)
    assert abs(theta_q(3, 0, 1j) - mpc("1.086434811213308014575")) < 1e-20
    assert abs(theta_q(3, 0, 1j) - pi ** 0.25 / ctx.gamma(0.75)) < 1e-25


def test_theta1_real_axis():
    assert abs(theta_q(1, mpc("0.1"), 1j) - mpc("0.280407609486908169764326")) < 1e-20


@given(xs, taus)
def test_against_mpmath(x, tau):
    q = ctx.exp(pi * I * mpc(tau))
    for k in (1, 2, 3, 4):
        b = theta_bounded(k, x, tau)
        ref = ctx.jtheta(k, pi * mpc(x), q)
        assert abs(b.value - ref) <= max(b.error, 1e-25) * 10 + 1e-24


@given(xs, taus)
def test_parity(x, tau):
    assert abs(theta_q(1, -x, tau) + theta_q(1, x, tau)) < 1e-24
    for k in (2, 3, 4):
        assert abs(theta_q(k, -x, tau) - theta_q(k, x, tau)) < 1e-24


@given(xs, taus)
def test_quasi_periods(x, tau):
    x, tau = mpc(x), mpc(tau)
    t1 = theta_q(1, x, tau)
    assert abs(theta_q(1, x + 1, tau) + t1) < 1e-22
    assert abs(theta_q(1, x + tau, tau) + ctx.exp(-pi * I * (2 * x + tau)) * t1) < 1e-20


@given(xs, taus)
def test_heat_equation(x, tau):
    for k in (1, 2, 3, 4):
        dxx, dt = theta_derivs(k, x, tau, [(2, 0), (0, 1)])
        assert abs(4 * pi * I * dt - dxx) < 1e-20


def test_derivatives_match_jtheta():
    q = ctx.exp(pi * I * TAU0)
    for k in (1, 2, 3, 4):
        for p in (1, 2, 3):
            assert abs(theta_dx_q(k, X0, TAU0, p) - ctx.jtheta(k, pi * X0, q, p) * pi ** p) < 1e-20


@pytest.mark.parametrize("ch", [(3, 2), (-3, 5), (2, -1), (0, 4), (5, 7)])
def test_characteristic_reduction(ch):
    rep, sign = ThetaChar(*ch).reduced()
    direct = char_series(ch[0], ch[1], X0, TAU0)[0].value
    assert abs(direct - sign * theta_char_q(rep, X0, TAU0)) < 1e-24


@pytest.mark.parametrize("ch", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_half_period_shifts(ch):
    for n in range(-2, 3):
        for m in range(-2, 3):
            new, pref = shift_half_periods(ch, n, m, X0, TAU0)
            lhs = theta_char_q(ch, X0 + mpc(n) / 2 + m * TAU0 / 2, TAU0)
            assert abs(lhs - pref * theta_char_q(new, X0, TAU0)) < 1e-20


@pytest.mark.parametrize("ch", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_shifted_derivative_and_constant_form(ch):
    for n in range(-1, 3):
        for m in range(-1, 3):
            z = mpc(n) / 2 + m * TAU0 / 2
            direct = char_series(ch[0], ch[1], X0 + z, TAU0, ((1, 0),))[0].value
            assert abs(theta_dx_shifted(ch, n, m, X0, TAU0) - direct) < 1e-18
            const = char_series(ch[0], ch[1], z, TAU0, ((1, 0),))[0].value
            assert abs(theta_const_dx_shifted(ch, n, m, TAU0) - const) < 1e-18


def test_reduce_x():
    x = X0 + 3 - 2 * TAU0
    xr, pref, nm = reduce_x((1, 0), x, TAU0)
    assert nm == (3, -2)
    assert abs(theta_char_q((1, 0), x, TAU0) - pref * theta_char_q((1, 0), xr, TAU0)) < 1e-18


def test_error_bound_is_honest():
    b = theta_bounded(2, X0, mpc("0.1+0.6j"))
    ref = ctx.jtheta(2, pi * X0, ctx.exp(pi * I * mpc("0.1+0.6j")))
    assert b.error <= 1e-25
    assert abs(b.value - ref) <= b.error + 1e-28


def test_budget_exhaustion():
    with pytest.raises(TailNotConverged):
        theta_q(3, 0, mpc("0.1+0.001j"), SeriesBudget(max_terms=50))


def test_lower_half_plane_rejected():
    with pytest.raises(ValueError):
        UHTau.of(1 - 1j)
    with pytest.raises(ValueError):
        theta_q(1, 0, 2)


def test_budget_validation():
    with pytest.raises(ValueError):
        SeriesBudget(abs_tol=0)
    with pytest.raises(ValueError):
        SeriesBudget(max_terms=3)
