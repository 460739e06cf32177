import pytest
from hypothesis import assume, given, settings, strategies as st

from theta_forge._mp import ctx, mpc, I
from theta_forge.errors import BranchPointProximity, PoleHit, PoleTooClose
from theta_forge.painleve import (HITCHIN, PICARD, PicardHitchinParams, blowup_ratio, complete_elliptic,
                                  entire_form, heun_schwarzian_check, hitchin_solution, hitchin_split_form,
                                  hitchin_tau_form, hitchin_wp_form, mero_f, nome_coefficients, okamoto_picard,
                                  p6_residual, picard_derivative, picard_solution, picard_sqrt_form,
                                  pole_lattice, second_series_poles, solution, tau_of_x, x_of_tau)

# OEIS A005797
NOME = [1, 8, 84, 992, 12514, 164688, 2232200, 30920128]

coef = st.builds(complex, st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
xpts = st.builds(complex, st.floats(0.1, 0.9), st.floats(-0.4, 0.4))
P = PicardHitchinParams(mpc("0.3+0.1j"), mpc("0.2-0.15j"))
PP = PicardHitchinParams(P.A, P.B, "picard")
X = mpc("0.35+0.12j")


def test_nome_coefficients():
    assert nome_coefficients(5) == NOME[:5]
    assert nome_coefficients(8) == NOME


@pytest.mark.parametrize("x", ["0.8", "0.85+0.05j", "0.9-0.05j"])
def test_nome_series_sums_to_q(x):
    x = mpc(x)
    w = (1 - x) / 16
    q = sum(c * w ** (j + 1) for j, c in enumerate(nome_coefficients(30)))
    assert abs(q - ctx.expjpi(tau_of_x(x))) < 1e-15


def test_legendre_relation():
    ek = complete_elliptic(0.5)
    assert ek.K == ek.Kp and abs(ek.tau - I) < 1e-30
    for x in (0.5, mpc("0.3+0.2j"), mpc("0.7-0.4j"), mpc("1.5+0.1j")):
        assert complete_elliptic(x).legendre_residual() < 1e-25


@pytest.mark.parametrize("x", ["0.3+0.2j", "0.6-0.1j"])
def test_elliptic_derivatives(x):
    x, h = mpc(x), ctx.mpf("1e-6")
    d = complete_elliptic(x).derivatives()
    hi, lo = complete_elliptic(x + h), complete_elliptic(x - h)
    for got, a, b in zip(d, (hi.K, hi.Kp, hi.E, hi.Ep), (lo.K, lo.Kp, lo.E, lo.Ep)):
        assert abs((a - b) / (2 * h) - got) < 1e-10


@given(xpts)
def test_x_tau_round_trip(x):
    x = mpc(x)
    t = tau_of_x(x)
    assert t.imag > 0
    assert abs(x_of_tau(t) - x) < 1e-24


def test_branch_guard():
    for x in (0, 1, mpc("1e-12")):
        with pytest.raises(BranchPointProximity):
            complete_elliptic(x)
    with pytest.raises(BranchPointProximity):
        heun_schwarzian_check(1)


def test_p6_sees_non_solutions():
    assert p6_residual(lambda s: mpc(2), X, *PICARD) > 1
    with pytest.raises(PoleTooClose):
        p6_residual(lambda s: s, X, *PICARD)


@settings(max_examples=10)
@given(coef, coef, xpts)
def test_hitchin_solves_p6(A, B, x):
    p = PicardHitchinParams(A, B)
    try:
        r = p6_residual(lambda s: hitchin_solution(p, s), x, *HITCHIN)
    except (PoleTooClose, PoleHit):
        assume(False)
    assert r < 1e-10


@settings(max_examples=10)
@given(coef, coef, xpts)
def test_picard_solves_p6(A, B, x):
    p = PicardHitchinParams(A, B, "picard")
    try:
        r = p6_residual(lambda s: picard_solution(p, s), x, *PICARD)
    except (PoleTooClose, PoleHit):
        assume(False)
    assert r < 1e-10


def test_hitchin_forms_agree():
    y = hitchin_solution(P, X)
    assert abs(hitchin_split_form(P, X) - y) < 1e-24
    assert abs(hitchin_wp_form(P.A_tau, P.B, tau_of_x(X))[1] - y) < 1e-24
    assert abs(entire_form(P, X) - y) < 1e-15
    x, y2 = hitchin_tau_form(P.A_tau, P.B, tau_of_x(X))
    assert abs(x - X) < 1e-25 and abs(y2 - y) < 1e-25
    assert solution(P, X) == y


def test_picard_forms_agree():
    y = picard_solution(PP, X)
    assert abs(picard_sqrt_form(PP, X) - y) < 1e-24
    assert solution(PP, X) == y
    y0, yx = picard_derivative(PP, X)
    assert abs(yx - ctx.diff(lambda s: picard_solution(PP, s), X)) < 1e-20


def test_okamoto_maps_picard_to_hitchin():
    assert abs(okamoto_picard(PP, X) - hitchin_solution(P, X)) < 1e-24
    assert p6_residual(lambda s: okamoto_picard(PP, s), X, *HITCHIN) < 1e-12


def test_params_validation():
    assert PP.p6_params == PICARD and P.p6_params == HITCHIN
    assert P.A_tau == -I * P.A
    with pytest.raises(ValueError):
        PicardHitchinParams(1, 0, "other")


@pytest.mark.parametrize("s", ["0.5", "0.3+0.1j", "-0.3-0.1j"])
def test_heun_schwarzian(s):
    assert heun_schwarzian_check(mpc(s)) < 1e-20


def test_small_pole_lattice():
    L = pole_lattice(1j, 0, (-6, 6), (-6, 6))
    # brute-force admissibility: Im((m - B)/(n + A)) > 0
    want = sum(1 for n in range(-6, 7) for m in range(-6, 7) if (mpc(m) / (n + 1j)).imag > 0)
    assert L.admissible_count == want
    assert L.verified_count == want and not L.flagged
    rows = list(L.csv_rows())
    assert rows[0] == "n,m,re(x),im(x)" and len(rows) == want + 1
    meta = L.metadata()
    assert meta["admissible_count"] == want and meta["flagged"] == []


def test_pole_lattice_flags_failures():
    L = pole_lattice(1j, 0, (-2, 2), (-2, 2), tol=1e-300)
    assert L.verified_count == 0 and len(L.flagged) == L.admissible_count
    assert all(p.theta_abs >= 0 for p in L.flagged)


def test_pole_lattice_skips_zero_denominator():
    L = pole_lattice(2, 0, (-3, 3), (-1, 1))
    assert L.skipped >= 3


def test_first_series_pole_blows_up():
    L = pole_lattice(1j, 0, (1, 1), (-1, -1))
    x0 = L.poles[0].x
    p = PicardHitchinParams(I * 1j, 0)  # x-form A = i A_tau
    assert abs(p.A_tau - 1j) < 1e-30
    assert blowup_ratio(lambda s: hitchin_solution(p, s), x0) > 50


def test_second_series_pole():
    roots = second_series_poles(P, (-1, 2), (-1.5, 1.5), grid=6)
    want = mpc("0.9126938246698208305282440498813+0.031085773452130426043259763945921j")
    near = [r for r in roots if abs(r - want) < 1e-12]
    assert near
    x0 = near[0]
    assert abs(mero_f(P, x0) + P.A) < 1e-20
    assert blowup_ratio(lambda s: hitchin_solution(P, s), x0) > 50
    assert blowup_ratio(lambda s: okamoto_picard(PP, s), x0) > 50
    # the Picard solution is regular there
    assert blowup_ratio(lambda s: picard_solution(PP, s), x0) < 2
