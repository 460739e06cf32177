import json

import pytest
from hypothesis import given, strategies as st

from conftest import small, taus, xs
from theta_forge._mp import ctx, mpc
from theta_forge.constants import eta_w, theta_constants
from theta_forge.diffsys import (SystemResidual, constant_jets, residual_diff_relations, residual_G2G3,
                                 residual_scalar, residual_TAU, residual_VAR, residual_X,
                                 residual_X_general_index, tau_char_row, verify_solution_family_sol)

away = xs.filter(lambda z: abs(z) > 0.05)


@given(away, taus)
def test_x_system(x, tau):
    for f in (residual_X, residual_X_general_index):
        r = f(x, tau)
        assert r.passed and r.max_residual < 1e-15


@given(away, taus)
def test_tau_system(x, tau):
    r = residual_TAU(x, tau)
    assert r.passed and r.max_residual < 1e-15


def test_diff_relations():
    assert residual_diff_relations(mpc("0.21+0.13j"), mpc("0.13+1.07j")).max_residual < 1e-15


@given(taus)
def test_constant_systems(tau):
    assert residual_VAR(tau).max_residual < 1e-18
    assert residual_G2G3(tau).max_residual < 1e-15


@pytest.mark.parametrize("ab", [(1, 1), (0, 1), (1, 0), (0, 0), (3, 2)])
def test_char_rows(ab):
    lhs, rhs = tau_char_row(*ab, mpc("0.21+0.13j"), mpc("0.13+1.07j"))
    assert abs(lhs - rhs) < 1e-15


def test_constant_jets_against_differences():
    tau, h = mpc("0.13+1.07j"), ctx.mpf("1e-8")
    j = constant_jets(tau, 3)
    fd = (theta_constants(tau + h)[1] - theta_constants(tau - h)[1]) / (2 * h)
    assert abs(j[1].derivative(1) - fd) < 1e-12
    fd2 = (eta_w(tau + h) - 2 * eta_w(tau) + eta_w(tau - h)) / h ** 2
    assert abs(j[3].derivative(2) - fd2) < 1e-6


@given(taus, st.sampled_from(["chazy", "JACOBI_C", "Halphen_X"]))
def test_scalar_equations(tau, which):
    r = residual_scalar(which, tau)
    assert r.passed and r.max_residual < 1e-15


@pytest.mark.parametrize("kw", [dict(k=2), dict(k=4)])
def test_jacobi_c_indices(kw):
    assert residual_scalar("JACOBI_C", mpc("0.13+1.07j"), **kw).max_residual < 1e-15


@pytest.mark.parametrize("kw", [dict(abc=(1, 1, 0)), dict(k=4, abc=(3, 1, 2)), dict(k=3, abc=(1, 0, 2))])
def test_halphen_x_variants(kw):
    assert residual_scalar("HALPHEN_X", mpc("0.13+1.07j"), **kw).max_residual < 1e-15


@pytest.mark.parametrize("kw", [dict(), dict(B=1), dict(A=2, B=-1)])
def test_psi_equation(kw):
    assert residual_scalar("PSI", mpc("0.13+1.07j"), **kw).max_residual < 1e-6


def test_unknown_scalar():
    with pytest.raises(ValueError):
        residual_scalar("nope", 1j)


@given(small, small, away, taus)
def test_solution_family(A, B, x, tau):
    r = verify_solution_family_sol(mpc(A) * 0.5, B, 2, x, tau)
    assert r.passed


def test_report_shape():
    r = residual_X(mpc("0.2"), 1j)
    rec = r.to_json()
    json.dumps(rec)
    assert rec["system"] == r.system_id and rec["pass"] is True
    assert set(rec) == {"system", "point", "residuals", "max_residual", "tol", "pass"}
    assert not SystemResidual("S", (), [1.0], 1e-9).passed
