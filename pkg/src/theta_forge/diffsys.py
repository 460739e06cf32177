"""Residuals of the closed differential systems for theta functions and constants.

Ground truth is always the term-wise differentiated q-series (or Lambert
series); the systems under test only ever see function values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._mp import ctx, mpc, pi, I
from .constants import (eta_dedekind, eta_w, eta_w_dtau, g2_g3_dtau_lambert, g2_g3_lambert,
                        theta_constants)
from .errors import PoleAtLatticePoint, QuadratureFailed
from .jets import Jet, taylor_solve
from .theta import as_tau, char_series, theta_char_derivs, theta_derivs

SYSTEM_IDS = ("X_SYS", "TAU_SYS", "VAR_SYS", "LAST_SYS", "G2G3_SYS", "CHAZY", "JACOBI_C",
              "HALPHEN_X", "PSI", "DIFF_REL", "SOL_FAMILY")

# (k, nu, mu) from nu = (8k-28)/(3k-10), mu = (10k-28)/(3k-8)
INDEX_TABLE = tuple((k, (8 * k - 28) // (3 * k - 10), (10 * k - 28) // (3 * k - 8)) for k in (2, 3, 4))


@dataclass
class SystemResidual:
    system_id: str
    point: tuple
    residuals: list = field(default_factory=list)
    tol: float = 1e-9
    labels: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def to_json(self) -> dict:
        from ._mp import format_complex

        return {"system": self.system_id,
                "point": [format_complex(p) for p in self.point],
                "residuals": dict(zip(self.labels or map(str, range(len(self.residuals))),
                                      self.residuals)),
                "max_residual": self.max_residual, "tol": self.tol, "pass": self.passed}


def _r(v) -> float:
    return float(abs(v))


def _lam(eta, th3, th4):
    """eta + (pi^2/12)(vartheta_3^4 + vartheta_4^4), i.e. Lambda/4."""
    return eta + pi ** 2 / 12 * (th3 ** 4 + th4 ** 4)


# right-hand sides, shared with the noncanonical layer


def x_system_rhs(th, th1p, c2, c3, c4, eta):
    """(theta_1', theta_2', theta_3', theta_4', theta_1'') from values and constants."""
    t1, t2, t3, t4 = th
    r = th1p / t1
    return (th1p,
            r * t2 - pi * c2 ** 2 * t3 * t4 / t1,
            r * t3 - pi * c3 ** 2 * t2 * t4 / t1,
            r * t4 - pi * c4 ** 2 * t2 * t3 / t1,
            th1p ** 2 / t1 - pi ** 2 * c3 ** 2 * c4 ** 2 * t2 ** 2 / t1 - 4 * _lam(eta, c3, c4) * t1)


def tau_system_rhs(th, th1p, c2, c3, c4, eta):
    """tau-derivatives of (theta_1, theta_2, theta_3, theta_4, theta_1')."""
    t1, t2, t3, t4 = th
    cs = {2: c2, 3: c3, 4: c4}
    ts = {1: t1, 2: t2, 3: t3, 4: t4}
    L = _lam(eta, c3, c4)
    base = c3 ** 2 * c4 ** 2 * t2 ** 2
    d1 = -I / (4 * pi) * th1p ** 2 / t1 + pi * I / 4 * base / t1 + I / pi * L * t1
    out = [d1]
    for k, nu, mu in INDEX_TABLE:
        tk = ts[k]
        val = (-I / (4 * pi) * th1p ** 2 / t1 ** 2 * tk
               + I / 2 * cs[k] ** 2 * th1p * ts[nu] * ts[mu] / t1 ** 2
               + pi * I / 4 * (base - cs[k] ** 2 * cs[mu] ** 2 * ts[nu] ** 2
                               - cs[k] ** 2 * cs[nu] ** 2 * ts[mu] ** 2) * tk / t1 ** 2
               + I / pi * L * tk)
        out.append(val)
    d1p = (-I / (4 * pi) * th1p ** 3 / t1 ** 2
           + 3 * I / pi * (pi ** 2 / 4 * base / t1 ** 2 + L) * th1p
           - pi ** 2 / 2 * I * c2 ** 2 * c3 ** 2 * c4 ** 2 * t2 * t3 * t4 / t1 ** 2)
    out.append(d1p)
    return tuple(out)


def var_rhs(c2, c3, c4, eta):
    """Derivatives of (vartheta_2, vartheta_3, vartheta_4, eta) in tau."""
    k = pi ** 2 / 12
    return ((I / pi) * (eta + k * (c3 ** 4 + c4 ** 4)) * c2,
            (I / pi) * (eta + k * (c2 ** 4 - c4 ** 4)) * c3,
            (I / pi) * (eta - k * (c2 ** 4 + c3 ** 4)) * c4,
            (I / pi) * (2 * eta ** 2 - pi ** 4 / 144 * (c2 ** 8 + c3 ** 8 + c4 ** 8)))


def _var_jet_rhs(y):
    c2, c3, c4, eta = y
    return list(var_rhs(c2, c3, c4, eta))


def constant_jets(tau, order: int):
    """Jets of (vartheta_2, vartheta_3, vartheta_4, eta) at tau from the closed system.

    The k-th derivative of each constant is jet.derivative(k); no differencing
    is involved.
    """
    t = as_tau(tau)
    th2, th3, th4 = theta_constants(t)
    return taylor_solve(_var_jet_rhs, [th2, th3, th4, eta_w(t)], order)


def constant_derivatives(tau, k: int):
    """k-th tau-derivatives of (vartheta_2, vartheta_3, vartheta_4, eta)."""
    return tuple(j.derivative(k) for j in constant_jets(tau, k))


def _theta_values(x, t, with_dtau=False):
    orders = [(0, 0), (1, 0), (2, 0)]
    if with_dtau:
        orders += [(0, 1), (1, 1)]
    out = {}
    for k in (1, 2, 3, 4):
        out[k] = theta_derivs(k, x, t, orders)
    return out


def _guard(t1):
    if abs(t1) < 1e-12:
        raise PoleAtLatticePoint("theta_1 is too small at this x")


def residual_X(x, tau, tol: float = 1e-9) -> SystemResidual:
    t = as_tau(tau)
    x = mpc(x)
    v = _theta_values(x, t)
    _guard(v[1][0])
    c2, c3, c4 = theta_constants(t)
    eta = eta_w(t)
    rhs = x_system_rhs([v[k][0] for k in (1, 2, 3, 4)], v[1][1], c2, c3, c4, eta)
    lhs = (v[1][1], v[2][1], v[3][1], v[4][1], v[1][2])
    res = [_r(a - b) for a, b in zip(lhs, rhs)]
    return SystemResidual("X_SYS", (x, t.tau), res, tol,
                          ["theta1", "theta2", "theta3", "theta4", "theta1p"])


def residual_X_general_index(x, tau, tol: float = 1e-9) -> SystemResidual:
    """The theta_k rows written through the (k, nu, mu) index table."""
    t = as_tau(tau)
    x = mpc(x)
    v = _theta_values(x, t)
    _guard(v[1][0])
    cs = dict(zip((2, 3, 4), theta_constants(t)))
    res = []
    for k, nu, mu in INDEX_TABLE:
        rhs = v[1][1] / v[1][0] * v[k][0] - pi * cs[k] ** 2 * v[nu][0] * v[mu][0] / v[1][0]
        res.append(_r(v[k][1] - rhs))
    return SystemResidual("X_SYS", (x, t.tau), res, tol, [f"k={k}" for k, _, _ in INDEX_TABLE])


def residual_diff_relations(x, tau, tol: float = 1e-10) -> SystemResidual:
    t = as_tau(tau)
    x = mpc(x)
    v = _theta_values(x, t)
    _guard(v[1][0])
    cs = dict(zip((2, 3, 4), theta_constants(t)))
    res = []
    for k, nu, mu in INDEX_TABLE:
        sgn = 1 if nu > mu else -1
        lhs = v[nu][1] / v[nu][0] - v[mu][1] / v[mu][0]
        rhs = sgn * pi * cs[k] ** 2 * v[1][0] * v[k][0] / (v[nu][0] * v[mu][0])
        res.append(_r(lhs - rhs))
        # the quadratic identity the relation rests on
        res.append(_r(sgn * cs[k] ** 2 * v[1][0] ** 2 - (cs[mu] ** 2 * v[nu][0] ** 2
                                                         - cs[nu] ** 2 * v[mu][0] ** 2)))
    return SystemResidual("DIFF_REL", (x, t.tau), res, tol)


def residual_TAU(x, tau, tol: float = 1e-9) -> SystemResidual:
    t = as_tau(tau)
    x = mpc(x)
    v = _theta_values(x, t, with_dtau=True)
    _guard(v[1][0])
    c2, c3, c4 = theta_constants(t)
    eta = eta_w(t)
    rhs = tau_system_rhs([v[k][0] for k in (1, 2, 3, 4)], v[1][1], c2, c3, c4, eta)
    lhs = (v[1][3], v[2][3], v[3][3], v[4][3], v[1][4])
    res = [_r(a - b) for a, b in zip(lhs, rhs)]
    # heat equation 4 pi i theta_tau = theta_xx for each function
    res += [_r(4 * pi * I * v[k][3] - v[k][2]) for k in (1, 2, 3, 4)]
    return SystemResidual("TAU_SYS", (x, t.tau), res, tol,
                          ["theta1", "theta2", "theta3", "theta4", "theta1p",
                           "heat1", "heat2", "heat3", "heat4"])


def _bracket(k: int) -> int:
    return -1 if k % 2 else 1


def tau_char_row(alpha: int, beta: int, x, tau):
    """The (alpha, beta) row of the tau system; returns (lhs, rhs)."""
    t = as_tau(tau)
    x = mpc(x)
    th1, th1p = theta_derivs(1, x, t, [(0, 0), (1, 0)])
    lhs = theta_char_derivs((alpha, beta), x, t, [(0, 1)])[0]
    thab = theta_char_derivs((alpha, beta), x, t, [(0, 0)])[0]
    c2, c3, c4 = theta_constants(t)
    eta = eta_w(t)
    th2 = theta_derivs(2, x, t, [(0, 0)])[0]

    def tc(p, q, z=x):
        return theta_char_derivs((p, q), z, t, [(0, 0)])[0]

    a1, b1 = 1 - alpha, 1 - beta
    c_ab = tc(alpha, beta, 0)
    br = _bracket(alpha * (beta // 2))
    rhs = (-I / (4 * pi) * th1p ** 2 / th1 ** 2 * thab
           + br * I / 2 * c_ab ** 2 * th1p * tc(a1, 0) * tc(0, b1) / th1 ** 2
           + pi * I / 4 * (c3 ** 2 * c4 ** 2 * th2 ** 2 - c_ab ** 2 * tc(0, b1, 0) ** 2 * tc(a1, 0) ** 2
                           - c_ab ** 2 * tc(a1, 0, 0) ** 2 * tc(0, b1) ** 2) * thab / th1 ** 2
           + I / pi * _lam(eta, c3, c4) * thab)
    return lhs, rhs


def residual_VAR(tau, tol: float = 1e-9) -> SystemResidual:
    t = as_tau(tau)
    cs = [char_series(a, b, 0, t, ((0, 0), (0, 1))) for a, b in ((1, 0), (0, 0), (0, 1))]
    vals = [c[0].value for c in cs]
    ders = [c[1].value for c in cs]
    eta = eta_w(t)
    deta = eta_w_dtau(t)
    rhs = var_rhs(*vals, eta)
    res = [_r(a - b) for a, b in zip(ders + [deta], rhs)]
    labels = ["vartheta2", "vartheta3", "vartheta4", "eta"]
    # (alpha, beta) form with the (pi^4/72) eta row
    th = {(1, 0): vals[0], (0, 0): vals[1], (0, 1): vals[2]}
    dth = {(1, 0): ders[0], (0, 0): ders[1], (0, 1): ders[2]}
    for a, b in ((1, 0), (0, 1), (1, 1)):
        u = th[(1 - a, 0)] ** 4 if (1 - a, 0) in th else None
        v = th[(0, 1 - b)] ** 4 if (0, 1 - b) in th else None
        ab = (a, b)
        if ab in th:
            rhs_ab = I / pi * (eta + pi ** 2 / 12 * (_bracket(b) * u - _bracket(a) * v)) * th[ab]
            res.append(_r(dth[ab] - rhs_ab))
            labels.append(f"last[{a},{b}]")
        ta0 = th[(a, 0)] if (a, 0) in th else th[(1, 0)]
        t0b = th[(0, b)] if (0, b) in th else th[(0, 1)]
        rhs_eta = I / pi * (2 * eta ** 2 - pi ** 4 / 72 * (ta0 ** 8 + _bracket(a + b) * ta0 ** 4 * t0b ** 4
                                                          + t0b ** 8))
        res.append(_r(deta - rhs_eta))
        labels.append(f"last_eta[{a},{b}]")
    return SystemResidual("VAR_SYS", (t.tau,), res, tol, labels)


def g2g3_rhs(g2, g3, eta):
    return ((I / pi) * (8 * g2 * eta - 12 * g3),
            (I / pi) * (12 * g3 * eta - ctx.mpf(2) / 3 * g2 ** 2),
            (I / pi) * (2 * eta ** 2 - g2 / 6))


def residual_G2G3(tau, tol: float = 1e-9) -> SystemResidual:
    t = as_tau(tau)
    g2, g3 = g2_g3_lambert(t)
    d2, d3 = g2_g3_dtau_lambert(t)
    eta = eta_w(t)
    deta = eta_w_dtau(t)
    rhs = g2g3_rhs(g2, g3, eta)
    res = [_r(a - b) for a, b in zip((d2, d3, deta), rhs)]
    c2, c3, c4 = theta_constants(t)
    # Riccati row against the theta^8 form of the eta row
    res.append(_r(rhs[2] - var_rhs(c2, c3, c4, eta)[3]))
    return SystemResidual("G2G3_SYS", (t.tau,), res, tol, ["g2", "g3", "eta", "riccati_vs_var"])


# scalar equations


def _chazy(tau):
    eta_j = constant_jets(tau, 3)[3]
    e0, e1, e2, e3 = eta_j.derivatives()
    return _r(pi * e3 - 12 * I * (2 * e0 * e2 - 3 * e1 ** 2))


def _jacobi_c(tau, k: int = 3):
    jets = constant_jets(tau, 4)
    th = jets[{2: 0, 3: 1, 4: 2}[k]]
    C = th ** -2
    Ctt = C.deriv().deriv()
    L = (C.truncate(2) ** 3) * Ctt
    dlog = L.deriv() / L.truncate(1)
    c0 = C.c[0]
    return _r(c0 ** 4 * dlog.c[0] ** 2 - (16 * c0 ** 3 * Ctt.c[0] - pi ** 2))


def _moebius_jet(a, b, c, d, tau, order):
    tj = Jet.variable(tau, order)
    return (tj * a + b) / (tj * c + d)


def halphen_X_jet(tau, k: int = 2, abc=(1, 0, 0), order: int = 3):
    """Jet of X = d/dtau ln[vartheta_k((a tau + b)/(c tau + 1)) / sqrt(c tau + 1)]."""
    a, b, c = abc
    if a - b * c != 1:
        raise ValueError("need a - b c = 1")
    tau = mpc(getattr(tau, "tau", tau))
    n = order + 1
    T = _moebius_jet(a, b, c, 1, tau, n)
    th_jet = constant_jets(T.c[0], n)[{2: 0, 3: 1, 4: 2}[k]]
    composed = th_jet.compose(T)
    lnf = composed.log() - (Jet.variable(tau, n) * c + 1).log() / 2
    return lnf.deriv()


def _halphen(tau, k=2, abc=(1, 0, 0)):
    X = halphen_X_jet(tau, k, abc, 3)
    x0, x1, x2, x3 = X.derivatives()[:4]
    return _r((x1 - 2 * x0 ** 2) * x3 - x2 ** 2 + 16 * x0 ** 3 * x2 + 4 * (x1 - 6 * x0 ** 2) * x1 ** 2)


def dedekind_jet(tau, order: int) -> Jet:
    """Jet of the Dedekind eta via eta^3 = vartheta_2 vartheta_3 vartheta_4 / 2."""
    jets = constant_jets(tau, order)
    lg = (jets[0] * jets[1] * jets[2]).log() / 3
    return (lg - lg.c[0]).exp() * eta_dedekind(tau)


def psi_jet(tau, A=1, B=0, tau0=2j) -> Jet:
    """Jet (order 2) of eta^-2 (A + B int_{tau0}^{tau} eta^4) along a straight segment."""
    t = as_tau(tau)
    ed = dedekind_jet(t, 2)
    integral = 0
    if B:
        t0 = mpc(tau0)
        try:
            integral = ctx.quad(lambda s: eta_dedekind(t0 + s * (t.tau - t0)) ** 4, [0, 0.5, 1],
                                method="gauss-legendre") * (t.tau - t0)
        except Exception as exc:
            raise QuadratureFailed(str(exc)) from exc
    integ = (ed ** 4).truncate(1).integral(integral)
    return ed ** -2 * (integ * B + A)


def _psi(tau, A=1, B=0):
    t = as_tau(tau)
    psi = psi_jet(t, A, B)
    g2, _ = g2_g3_lambert(t)
    return _r(psi.derivative(2) + g2 / (3 * pi ** 2) * psi.c[0])


def residual_scalar(which: str, tau, tol: float | None = None, **kw) -> SystemResidual:
    t = as_tau(tau)
    which = which.upper()
    if which == "CHAZY":
        r, tol_ = _chazy(t), 1e-8
    elif which == "JACOBI_C":
        r, tol_ = _jacobi_c(t, kw.get("k", 3)), 1e-8
    elif which == "HALPHEN_X":
        r, tol_ = _halphen(t, kw.get("k", 2), kw.get("abc", (1, 0, 0))), 1e-8
    elif which == "PSI":
        r, tol_ = _psi(t, kw.get("A", 1), kw.get("B", 0)), 1e-6
    else:
        raise ValueError(f"unknown scalar equation {which!r}")
    return SystemResidual(which, (t.tau,), [r], tol if tol is not None else tol_, [which.lower()])


# the solution family built from shifts of the argument


def _family_values(A, B, C, x, t):
    """Family members and x-, tau-derivatives as plain tuples."""
    A, B, C = mpc(A), mpc(B), mpc(C)
    z = x + A * t.tau + B
    pref = C * ctx.exp(pi * I * A * (2 * x + A * t.tau))
    vals = {}
    for k in (1, 2, 3, 4):
        vals[k] = theta_derivs(k, z, t, [(0, 0), (1, 0), (2, 0), (0, 1), (3, 0), (1, 1)])
    return A, pref, vals


def family_theta(A, B, C, x, tau):
    """(theta_1..theta_4, theta_1') of the shifted family at (x, tau)."""
    t = as_tau(tau)
    x = mpc(x)
    A, pref, v = _family_values(A, B, C, x, t)
    th = tuple(pref * v[k][0] for k in (1, 2, 3, 4))
    th1p = pref * (v[1][1] + 2 * pi * I * A * v[1][0])
    return th, th1p


def verify_solution_family_sol(A, B, C, x, tau, tol: float = 1e-8) -> SystemResidual:
    """Check that the shifted family solves the x- and tau-systems.

    x- and tau-derivatives of the family are taken with the chain rule on
    term-wise differentiated series (the prefactor depends on both variables).
    """
    t = as_tau(tau)
    x = mpc(x)
    Ac, pref, v = _family_values(A, B, C, x, t)
    c2, c3, c4 = theta_constants(t)
    eta = eta_w(t)
    dlog_x = 2 * pi * I * Ac
    dlog_t = pi * I * Ac ** 2
    th = [pref * v[k][0] for k in (1, 2, 3, 4)]
    if abs(th[0]) < 1e-12:
        raise PoleAtLatticePoint("family theta_1 vanishes")
    thx = [pref * (v[k][1] + dlog_x * v[k][0]) for k in (1, 2, 3, 4)]
    # total tau-derivative: partial_tau + A partial_z on the series, plus the prefactor
    tht = [pref * (v[k][3] + Ac * v[k][1] + dlog_t * v[k][0]) for k in (1, 2, 3, 4)]
    th1p = thx[0]
    th1pp = pref * (v[1][2] + 2 * dlog_x * v[1][1] + dlog_x ** 2 * v[1][0])
    th1p_t = pref * (v[1][5] + Ac * v[1][2] + dlog_t * v[1][1]
                     + dlog_x * (v[1][3] + Ac * v[1][1])
                     + dlog_t * dlog_x * v[1][0])
    rx = x_system_rhs(th, th1p, c2, c3, c4, eta)
    rt = tau_system_rhs(th, th1p, c2, c3, c4, eta)
    res = [_r(a - b) for a, b in zip(thx[:1] + thx[1:] + [th1pp], rx)]
    res += [_r(a - b) for a, b in zip(tht + [th1p_t], rt)]
    res.append(_r(c2 ** 2 * th[3] ** 2 - c4 ** 2 * th[1] ** 2 - c3 ** 2 * th[0] ** 2))
    res.append(_r(c2 ** 2 * th[2] ** 2 - c3 ** 2 * th[1] ** 2 - c4 ** 2 * th[0] ** 2))
    labels = ["x1", "x2", "x3", "x4", "x1p", "t1", "t2", "t3", "t4", "t1p", "quad1", "quad2"]
    return SystemResidual("SOL_FAMILY", (x, t.tau), res, tol, labels)
