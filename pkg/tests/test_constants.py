import random

import pytest
from hypothesis import given, strategies as st

from conftest import small, taus
from theta_forge._mp import ctx, mpc, pi, I
from theta_forge.constants import (EPS_CUBE, branch_points, eta_dedekind, eta_dedekind_product, eta_from_theta1,
                                   eta_w, eta_w_dtau, equianharmonic_periods, fundamental_domain_reduce,
                                   g2_from_thetas, g2_g3_dtau_lambert, g2_g3_lambert, g3_from_thetas,
                                   invariants_of_periods, klein_j, lemniscatic_periods, modular_inversion,
                                   solve_j, theta_constants)
from theta_forge.errors import DegenerateCurve, DegeneratePeriods
from theta_forge.modmap import ModMap
from theta_forge.weierstrass import zeta_wp

OMEGA_L = ctx.gamma(0.25) ** 2 / (4 * ctx.sqrt(2 * pi))  # real half-period of 4z^3 - 4z
OMEGA_E = ctx.gamma(ctx.mpf(1) / 3) ** 3 / (4 * pi)  # real half-period of 4z^3 - 1


def test_lemniscatic_point():
    g2, g3 = g2_g3_lambert(1j)
    assert abs(g3) < 1e-25
    assert abs(g2 - 4 * OMEGA_L ** 4) < 1e-24
    assert abs(g2 - mpc("11.8170450080771157683163")) < 1e-20
    assert abs(eta_w(1j) - pi / 4) < 1e-25
    assert abs(klein_j(1j) - 1) < 1e-25


def test_equianharmonic_point():
    g2, _ = g2_g3_lambert(EPS_CUBE)
    assert abs(g2) < 1e-24
    assert abs(klein_j(EPS_CUBE)) < 1e-24


def test_j_at_2i():
    # j(2i) = 66^3
    assert abs(klein_j(2j) - mpc(287496) / 1728) < 1e-20


def test_dedekind_eta_at_i():
    assert abs(eta_dedekind(1j) - ctx.gamma(0.25) / (2 * pi ** 0.75)) < 1e-25


@given(taus)
def test_jacobi_identities(tau):
    th2, th3, th4 = theta_constants(tau)
    assert abs(th3 ** 4 - th2 ** 4 - th4 ** 4) < 1e-22
    assert abs(2 * eta_dedekind(tau) ** 3 - th2 * th3 * th4) < 1e-22
    assert abs(eta_dedekind(tau) - eta_dedekind_product(tau)) < 1e-22


@given(taus)
def test_weierstrass_eta_two_ways(tau):
    assert abs(eta_w(tau) - eta_from_theta1(tau)) < 1e-20


@given(taus)
def test_legendre_relation(tau):
    # eta omega' - eta' omega = pi i / 2 with omega = 1, omega' = tau
    tau = mpc(tau)
    eta_p = zeta_wp(tau, tau).zeta
    assert abs(eta_w(tau) * tau - eta_p - pi * I / 2) < 1e-20


@given(taus)
def test_invariants_from_thetas(tau):
    g2, g3 = g2_g3_lambert(tau)
    th = theta_constants(tau)
    for ab in ((1, 0), (0, 1), (1, 1)):
        assert abs(g2_from_thetas(*ab, *th) - g2) < 1e-20
        assert abs(g3_from_thetas(*ab, *th) - g3) < 1e-20


@given(taus)
def test_branch_points(tau):
    g2, g3 = g2_g3_lambert(tau)
    es = branch_points(tau).as_tuple()
    assert abs(sum(es)) < 1e-22
    for e in es:
        assert abs(4 * e ** 3 - g2 * e - g3) < 1e-20
    assert abs(zeta_wp(1, tau).wp - es[0]) < 1e-20


def test_tau_derivatives():
    tau, h = mpc("0.3+1.1j"), ctx.mpf("1e-10")
    fd = [(a - b) / (2 * h) for a, b in zip(g2_g3_lambert(tau + h), g2_g3_lambert(tau - h))]
    for a, b in zip(fd, g2_g3_dtau_lambert(tau)):
        assert abs(a - b) < 1e-12
    assert abs((eta_w(tau + h) - eta_w(tau - h)) / (2 * h) - eta_w_dtau(tau)) < 1e-12


def _maps():
    return st.tuples(st.integers(1, 9), st.integers(-9, 9)).filter(lambda cd: _coprime(*cd))


def _coprime(c, d):
    import math
    return math.gcd(c, d) == 1


def _complete(c, d):
    for a in range(-40, 41):
        if (a * d - 1) % c == 0:
            return ModMap(a, (a * d - 1) // c, c, d)


@given(_maps(), taus)
def test_eta_modular_law(cd, tau):
    m = _complete(*cd)
    tau = mpc(tau)
    red, g = fundamental_domain_reduce(m.apply(tau))
    # g o m sends tau straight to the reduced point, where eta_w converges fast
    composite = g @ m
    wc = composite.cocycle(tau)
    assert abs(eta_w(red) - (wc ** 2 * eta_w(tau) - pi * I / 2 * composite.c * wc)) < 1e-15 * max(1, abs(wc) ** 2)


@given(_maps(), taus)
def test_klein_j_invariance(cd, tau):
    m = _complete(*cd)
    j0 = klein_j(tau)
    assert abs(klein_j(m.apply(mpc(tau))) - j0) < 1e-18 * max(1, abs(j0))


@given(st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)))
def test_fundamental_domain_reduce(z):
    tau = mpc(complex(z.real, abs(z.imag) + 0.05))
    red, g = fundamental_domain_reduce(tau)
    t = red.tau
    assert abs(t.real) <= 0.5 + 1e-20 and abs(t) >= 1 - 1e-20
    assert abs(g.apply(tau) - t) < 1e-20


@given(small.filter(lambda z: abs(z) > 0.05))
def test_solve_j_round_trip(z):
    target = mpc(z) * 5
    t = solve_j(target)
    assert abs(klein_j(t) - target) < 1e-18 * max(1, abs(target))


def test_inversion_round_trip():
    rng = random.Random(11)
    for _ in range(10):
        a = mpc(complex(rng.uniform(-3, 3), rng.uniform(-3, 3)))
        b = mpc(complex(rng.uniform(-3, 3), rng.uniform(-3, 3)))
        om, omp = modular_inversion(a, b)
        g2, g3 = invariants_of_periods(om, omp)
        assert abs(g2 - a) / abs(a) < 1e-20
        assert abs(g3 - b) / abs(b) < 1e-20


def test_closed_forms():
    om, omp = lemniscatic_periods(4)
    assert abs(om - OMEGA_L) < 1e-25 and abs(omp - I * OMEGA_L) < 1e-25
    om, omp = equianharmonic_periods(1)
    assert abs(om - OMEGA_E) < 1e-25
    g2, g3 = invariants_of_periods(om, omp)
    assert abs(g2) < 1e-24 and abs(g3 - 1) < 1e-24


def test_near_special_points_conditioning():
    # J - 1 and J are tiny here; the solver must not lose the small invariant
    for a, b in ((4, mpc("1e-12")), (mpc("1e-10"), 1)):
        g2, g3 = invariants_of_periods(*modular_inversion(a, b))
        assert abs(g2 - a) / abs(a) < 1e-12 and abs(g3 - b) / abs(b) < 1e-12


def test_degenerate_inputs():
    with pytest.raises(DegenerateCurve):
        modular_inversion(3, 1)
    with pytest.raises(DegenerateCurve):
        modular_inversion(0, 0)
    with pytest.raises(DegeneratePeriods):
        invariants_of_periods(1, 2)
