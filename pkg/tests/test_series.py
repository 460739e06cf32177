from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from conftest import taus, xs
from theta_forge._mp import mpc
from theta_forge.constants import branch_points, g2_g3_lambert
from theta_forge.errors import IntegralityViolation, TruncationTooCoarse
from theta_forge.series import (SIGMA_PIPELINES, G_ab_permuted, _as_int, grid_A, grid_B_eps, grid_B_sigma,
                                grid_G_ab, grid_G_theta1, halphen_Ck_polys, halphen_operator_apply,
                                sigma_lambda_series, sigma_series, theta1_series, theta_k_series, xi_series)
from theta_forge.theta import theta_q
from theta_forge.weierstrass import sigma_from_theta, sigma_lambda

G_THETA1_4 = [[1, 0, -6, -48, -324], [0, -6, -72, -648, -4320], [-6, 72, -972, -1728, 99792],
              [48, -648, 1728, 194184, 738720], [-324, 4320, 99792, -738720, -53142480]]


def _sigma_from_wp(order):
    """Coefficients of sigma(u)/u in u^2 from the Laurent series of wp, independent of any recurrence."""
    g2, g3 = sp.symbols("g2 g3")
    K = order + 2
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, K + 1):
        c[k] = sp.expand(sp.Rational(3, (2 * k + 1) * (k - 3)) * sum(c[m] * c[k - m] for m in range(2, k - 1)))
    # log(sigma/u) = -sum c_k u^(2k) / ((2k)(2k - 1)), as a series in v = u^2
    L = [0, 0] + [-c[k] / (2 * k * (2 * k - 1)) for k in range(2, K + 1)]
    E = [sp.Integer(1)]
    for n in range(1, K + 1):
        E.append(sp.expand(sum(k * L[k] * E[n - k] for k in range(1, n + 1)) / n))
    return E, g2, g3


def test_A_grid_against_sigma_expansion():
    E, g2, g3 = _sigma_from_wp(10)
    A = grid_A(5, 4)
    for m in range(6):
        for n in range(5):
            p = 4 * m + 6 * n + 1
            if p > 21:
                continue
            coeff = sp.expand(E[(p - 1) // 2] * sp.factorial(p))
            want = sp.Poly(coeff, g2, g3).coeff_monomial(g2 ** m * g3 ** n)
            # sigma = sum A_{m,n} (g2/2)^m (2 g3)^n u^p / p!
            assert want == sp.Rational(A[m, n], 2 ** m) * 2 ** n


def test_A_grid_values():
    A = grid_A(3, 3)
    assert A[1, 0] == -1 and A[0, 1] == -3
    assert [[str(v) for v in r] for r in A.rows()] == [["1", "-3", "-54", "14904"], ["-1", "-18", "4968", "502200"],
                                                      ["-9", "513", "257580", "162100440"],
                                                      ["69", "33588", "20019960", "-9465715080"]]


def test_C_polynomials():
    P = halphen_Ck_polys(3)
    a, b = Fraction(7, 3), Fraction(-5, 2)
    assert P[2](a, b) == -a / 2
    assert P[3](a, b) == -6 * b


def test_G_theta1_values():
    assert grid_G_theta1(4, 4).rows() == G_THETA1_4
    G = grid_G_theta1(1, 1)
    assert G[1, 0] == -G[0, 1]


@pytest.mark.parametrize("ext", [6, 12])
def test_grid_symmetries(ext):
    G = grid_G_theta1(ext, ext)
    assert all(G[m, n] == (-1) ** (m + n) * G[n, m] for m in range(ext + 1) for n in range(ext + 1))
    g = {(a, b): grid_G_ab(a, ext, ext, beta=b) for a in (0, 1) for b in (0, 1)}
    for (a, b), X in g.items():
        for m in range(ext + 1):
            for n in range(ext + 1):
                assert X[n, m] == (-1) ** ((m + n) * (a + b + 1)) * X[m, n]
                assert g[(b, a)][m, n] == (-1) ** ((m + n) * (a + b)) * X[m, n]
                assert G_ab_permuted(a, b, ext, ext)[m, n] == X[m, n]


def test_b_grids_are_integral():
    for g in (grid_B_eps(0, 12, 12), grid_B_eps(1, 12, 12), grid_B_sigma(12, 12)):
        assert all(isinstance(v, int) for v in g.data.values())
    assert grid_B_eps(0, 2, 1).rows() == [[1, -1], [0, 12], [0, 0]]


def test_integrality_guard():
    assert _as_int("X", 0, 0, Fraction(6, 3)) == 2
    with pytest.raises(IntegralityViolation):
        _as_int("X", 1, 2, Fraction(1, 2))


def test_grid_extent_checks():
    with pytest.raises(ValueError):
        grid_A(-1, 2)
    with pytest.raises(IndexError):
        grid_A(2, 2)[3, 0]
    assert grid_A(2, 2)[-1, 0] == 0
    with pytest.raises(ValueError):
        grid_B_eps(2, 3, 3)


def test_grid_json():
    rec = grid_G_theta1(2, 1).to_json()
    assert rec["grid_name"] == "G_theta1" and rec["extents"] == [2, 1]
    assert rec["rows"] == [["1", "0"], ["0", "-6"], ["-6", "72"]]


@given(xs, taus, st.sampled_from(SIGMA_PIPELINES))
def test_sigma_pipelines(x, tau, pipeline):
    g2, g3 = g2_g3_lambert(tau)
    assert abs(sigma_series(x, g2, g3, 20, pipeline) - sigma_from_theta(x, tau)) < 1e-20


@given(xs, taus)
def test_xi_and_sigma_lambda(x, tau):
    g2, _ = g2_g3_lambert(tau)
    es = branch_points(tau).as_tuple()
    assert abs(xi_series(x, es[0], g2, 0, 20) - sigma_from_theta(x, tau)) < 1e-18
    for lam in (1, 2, 3):
        assert abs(sigma_lambda_series(x, es[lam - 1], g2, 25) - sigma_lambda(x, lam, tau=tau)) < 1e-16


@given(xs, taus, st.sampled_from(["G_grid", "eta3_deriv"]), st.sampled_from([1, 2, 3, 4]))
def test_theta_pipelines(x, tau, pipeline, k):
    assert abs(theta_k_series(k, x, tau, 25, pipeline) - theta_q(k, x, tau)) < 1e-18


@pytest.mark.parametrize("variant", [0, 1, 2])
def test_theta1_variants(variant):
    x, tau = mpc("0.2+0.05j"), mpc("0.1+1.1j")
    assert abs(theta1_series(x, tau, 25, variant=variant) - theta_q(1, x, tau)) < 1e-18


def test_halphen_operator_representations():
    tau = mpc("0.1+1.1j")
    g2, g3 = g2_g3_lambert(tau)
    P = halphen_Ck_polys(4)
    for ab in ((1, 0), (0, 1), (1, 1)):
        for k in (2, 3):
            v = halphen_operator_apply(P[k], "theta_ab", tau, *ab)
            assert abs(v - halphen_operator_apply(P[k])(g2, g3)) < 1e-18


def test_truncation_guard():
    g2, g3 = g2_g3_lambert(1j)
    with pytest.raises(TruncationTooCoarse):
        sigma_series(mpc("0.9"), g2, g3, order=3, tol=1e-20)
    sigma_series(mpc("0.1"), g2, g3, order=20, tol=1e-20)
