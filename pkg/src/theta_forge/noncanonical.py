"""Theta functions with free constants: the x-system with arbitrary (vartheta, eta).

The free constants need not be theta-constants of any tau. Solutions are
rescaled canonical series at an auxiliary modulus mu with an elementary
Gaussian factor; the algebraic integrals A1, A2, A3 measure the departure
from the canonical case.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._mp import ctx, mpc, pi, I
from .constants import eta_w, klein_j, solve_j, theta_constants
from .diffsys import SystemResidual, constant_jets, tau_system_rhs, x_system_rhs
from .errors import PoleAtLatticePoint
from .jets import Jet
from .modmap import ModMap
from .theta import as_tau, theta_derivs
from .weierstrass import richardson_central, zeta_wp


def _r(v) -> float:
    return float(abs(v))


@dataclass(frozen=True)
class NoncanonicalParams:
    """Free constants of the x-system plus the integrals A1, A2 (A3 derived)."""

    vartheta2: object
    vartheta3: object
    vartheta4: object
    eta: object
    A1: object = 1
    A2: object = 1

    def __post_init__(self):
        for name in ("vartheta2", "vartheta3", "vartheta4", "eta", "A1", "A2"):
            object.__setattr__(self, name, mpc(getattr(self, name)))

    @property
    def thetas(self):
        return self.vartheta2, self.vartheta3, self.vartheta4

    @property
    def A3_4(self):
        """A3^4 from A3^4 vartheta_2^4 = A1^4 vartheta_3^4 - A2^4 vartheta_4^4."""
        return (self.A1 ** 4 * self.vartheta3 ** 4 - self.A2 ** 4 * self.vartheta4 ** 4) / self.vartheta2 ** 4

    @property
    def A3(self):
        return ctx.root(self.A3_4, 4)

    @property
    def lambda4(self):
        """Lambda/4 = eta + (pi^2/12)(vartheta_3^4 + vartheta_4^4)."""
        return self.eta + pi ** 2 / 12 * (self.vartheta3 ** 4 + self.vartheta4 ** 4)

    @property
    def Lambda(self):
        return 4 * self.lambda4

    @classmethod
    def canonical(cls, tau) -> "NoncanonicalParams":
        t = as_tau(tau)
        return cls(*theta_constants(t), eta_w(t))

    def is_canonical(self, tol: float = 1e-20) -> bool:
        return abs(self.A1 - 1) < tol and abs(self.A2 - 1) < tol and abs(self.A3_4 - 1) < tol


@dataclass(frozen=True)
class GeneralSolution:
    """Integration constants (A, B, C, kappa, mu) of the general x-solution."""

    A: object
    B: object
    C: object
    kappa: object
    mu: object

    def __post_init__(self):
        for name in ("A", "B", "C", "kappa", "mu"):
            object.__setattr__(self, name, mpc(getattr(self, name)))
        as_tau(self.mu)

    def M(self, params: NoncanonicalParams):
        c2, c3, c4 = theta_constants(self.mu)
        lam_mu = eta_w(self.mu) + pi ** 2 / 12 * (c3 ** 4 + c4 ** 4)
        return self.kappa ** 2 * lam_mu - params.lambda4


def integrals_A(thetas, params: NoncanonicalParams):
    """(A1^4, A2^4) from values (theta_1..theta_4) at one point."""
    t1, t2, t3, t4 = thetas
    c2, c3, c4 = params.thetas
    if abs(t1) < 1e-20:
        raise PoleAtLatticePoint("theta_1 vanishes at the sample point")
    a1 = (c2 ** 2 * t4 ** 2 - c4 ** 2 * t2 ** 2) / (c3 ** 2 * t1 ** 2)
    a2 = (c2 ** 2 * t3 ** 2 - c3 ** 2 * t2 ** 2) / (c4 ** 2 * t1 ** 2)
    return a1, a2


def params_from_family(gs: GeneralSolution, vartheta2, vartheta3, vartheta4, eta=None) -> NoncanonicalParams:
    """Free constants consistent with (kappa, mu): A1^2 = kappa vartheta_3^2(mu)/vartheta_3^2, etc."""
    c2m, c3m, c4m = theta_constants(gs.mu)
    v2, v3, v4 = mpc(vartheta2), mpc(vartheta3), mpc(vartheta4)
    A1 = ctx.sqrt(gs.kappa * c3m ** 2 / v3 ** 2)
    A2 = ctx.sqrt(gs.kappa * c4m ** 2 / v4 ** 2)
    return NoncanonicalParams(v2, v3, v4, eta_w(gs.mu) if eta is None else eta, A1, A2)


def family_jet(k: int, gs: GeneralSolution, params: NoncanonicalParams, x, order: int,
               signs=(1, 1, 1, 1)) -> Jet:
    """Jet in x of the k-th member of the general solution, to the given order."""
    x = mpc(x)
    mu = as_tau(gs.mu)
    c2m, c3m, c4m = theta_constants(mu)
    v2, v3, v4 = params.thetas
    if k == 1:
        pref = v2 * v3 * v4 / (c2m * c3m * c4m)  # vartheta2 vartheta3 vartheta4 / (2 eta_D^3(mu))
    else:
        pref = gs.kappa * {2: v2 / c2m, 3: v3 / c3m, 4: v4 / c4m}[k]
    z = gs.kappa * x + gs.B
    ds = theta_derivs(k, z, mu, [(p, 0) for p in range(order + 1)])
    th = Jet([ds[p] * gs.kappa ** p / ctx.factorial(p) for p in range(order + 1)])
    u = Jet.variable(x + gs.A, order)
    gauss = (u * u * (2 * gs.M(params))).exp()
    return th * gauss * (signs[k - 1] * pref * gs.C)


def general_solution_eval(gs: GeneralSolution, params: NoncanonicalParams, x, signs=(1, 1, 1, 1)):
    """(theta_1, theta_2, theta_3, theta_4, theta_1') of the general solution at x."""
    jets = [family_jet(k, gs, params, x, 1, signs) for k in (1, 2, 3, 4)]
    return tuple(j.c[0] for j in jets) + (jets[0].c[1],)


def family_x_residual(gs: GeneralSolution, params: NoncanonicalParams, x, signs=(1, 1, 1, 1),
                      tol: float = 1e-8) -> SystemResidual:
    """Residual of the x-system with the free constants of ``params``."""
    x = mpc(x)
    jets = [family_jet(k, gs, params, x, 2, signs) for k in (1, 2, 3, 4)]
    th = [j.c[0] for j in jets]
    if abs(th[0]) < 1e-20:
        raise PoleAtLatticePoint("theta_1 vanishes")
    rhs = x_system_rhs(th, jets[0].c[1], *params.thetas, params.eta)
    lhs = [j.c[1] for j in jets] + [2 * jets[0].c[2]]
    res = [_r(a - b) for a, b in zip(lhs, rhs)]
    return SystemResidual("X_SYS", (x, gs.mu), res, tol,
                          ["theta1", "theta2", "theta3", "theta4", "theta1p"])


# the fifth-order equation and its canonical factorized form


def log_derivs(jet: Jet):
    """[(ln f)', (ln f)'', ...] at the base point."""
    return jet.log().derivatives()[1:]


def residual_F_equation(log_derivatives, Lambda) -> float:
    """F^2 F''' - 2 F F' F'' + F'^3 + (F^4)' with F = (ln theta)'' + Lambda.

    ``log_derivatives`` holds (ln theta)^{(p)} for p = 1..5 (at least 2..5).
    """
    l = list(log_derivatives)
    F = l[1] + Lambda
    F1, F2, F3 = l[2], l[3], l[4]
    return float(abs(F ** 2 * F3 - 2 * F * F1 * F2 + F1 ** 3 + 4 * F ** 3 * F1))


def residual_w_equation(log_derivatives, params: NoncanonicalParams) -> float:
    """Canonical factorized third-order equation for F = (ln theta_k)''.

    The leading coefficient is -4: F = -4(wp(2x) + eta), so F'^2 = 64 wp'^2 flips the sign of
    the cubic.
    """
    l = list(log_derivatives)
    F, F1 = l[1], l[2]
    c2, c3, c4 = params.thetas
    base = F + 4 * params.eta
    k = pi ** 2 / 3
    rhs = -4 * (base + k * (c3 ** 4 + c4 ** 4)) * (base + k * (c2 ** 4 - c4 ** 4)) * (base - k * (c2 ** 4 + c3 ** 4))
    return float(abs(F1 ** 2 - rhs))


def theta_log_derivs(k: int, x, tau, order: int = 5):
    ds = theta_derivs(k, x, tau, [(p, 0) for p in range(order + 1)])
    jet = Jet([ds[p] / ctx.factorial(p) for p in range(order + 1)])
    if abs(jet.c[0]) < 1e-20:
        raise PoleAtLatticePoint("theta vanishes at x")
    return log_derivs(jet)


def wp_F_residual(x, tau, shift=0) -> float:
    """The F-equation on F = wp(1) - wp(x + shift) (half-periods 1, tau), with Lambda = 0."""
    from .constants import g2_g3_lambert

    t = as_tau(tau)
    p = zeta_wp(mpc(x) + shift, t)
    e1 = zeta_wp(1, t).wp
    g2, _ = g2_g3_lambert(t)
    wp2 = 6 * p.wp ** 2 - g2 / 2
    wp3 = 12 * p.wp * p.wp_prime
    F, F1, F2, F3 = e1 - p.wp, -p.wp_prime, -wp2, -wp3
    return float(abs(F ** 2 * F3 - 2 * F * F1 * F2 + F1 ** 3 + 4 * F ** 3 * F1))


# renormalized variables and the Darboux-Halphen layer


def renormalized_systems_residual(x, tau, tol: float = 1e-8) -> SystemResidual:
    """Bold-variable x-system, bold tau-system (tau = 4 pi i bold_tau) and compatibility rows."""
    t = as_tau(tau)
    x = mpc(x)
    jets = constant_jets(t, 3)
    c2, c3, c4, eta = (j.c[0] for j in jets)
    # d/d bold_tau = 4 pi i d/dtau
    X, Y, Z = (4 * pi * I * j.c[1] / j.c[0] for j in jets[:3])
    Lam = 4 * (eta + pi ** 2 / 12 * (c3 ** 4 + c4 ** 4))
    dLam = 4 * pi * I * 4 * (jets[3].c[1] + pi ** 2 / 12 * 4 * (c3 ** 3 * jets[1].c[1] + c4 ** 3 * jets[2].c[1]))
    orders = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]
    v = {k: theta_derivs(k, x, t, orders) for k in (1, 2, 3, 4)}
    if abs(v[1][0]) < 1e-12:
        raise PoleAtLatticePoint("theta_1 vanishes")
    scale = {1: 1, 2: pi * c3 * c4, 3: pi * c2 * c4, 4: pi * c2 * c3}
    dlog_scale = {1: 0, 2: Y + Z, 3: X + Z, 4: X + Y}
    b = {k: scale[k] * v[k][0] for k in v}
    bx = {k: scale[k] * v[k][1] for k in v}
    bt = {k: scale[k] * (4 * pi * I * v[k][3]) + dlog_scale[k] * b[k] for k in v}
    b1p, b1pp = v[1][1], v[1][2]
    b1p_t = 4 * pi * I * v[1][4]
    r = b1p / b[1]
    res = [
        _r(bx[2] - (r * b[2] - b[3] * b[4] / b[1])),
        _r(bx[3] - (r * b[3] - b[2] * b[4] / b[1])),
        _r(bx[4] - (r * b[4] - b[2] * b[3] / b[1])),
        _r(b1pp - (b1p ** 2 / b[1] - b[2] ** 2 / b[1] - Lam * b[1])),
        _r(bt[1] - (b1p ** 2 / b[1] - b[2] ** 2 / b[1] - Lam * b[1])),
        _r(b1p_t - (b1p ** 3 / b[1] ** 2 - 3 * (b[2] ** 2 + Lam * b[1] ** 2) * b1p / b[1] ** 2
                    + 2 * b[2] * b[3] * b[4] / b[1] ** 2)),
        _r(bt[2] - (r ** 2 * b[2] - 2 * b1p * b[3] * b[4] / b[1] ** 2
                    - (b[2] ** 2 - b[3] ** 2 - b[4] ** 2) * b[2] / b[1] ** 2 - (Lam - (Y + Z)) * b[2])),
        _r(bt[3] - (r ** 2 * b[3] - 2 * b1p * b[2] * b[4] / b[1] ** 2
                    + b[4] ** 2 * b[3] / b[1] ** 2 - (Lam - (X + Z)) * b[3])),
        _r(bt[4] - (r ** 2 * b[4] - 2 * b1p * b[2] * b[3] / b[1] ** 2
                    + b[3] ** 2 * b[4] / b[1] ** 2 - (Lam - (X + Y)) * b[4])),
        _r(X + Lam),
        _r(Y + Lam - (b[3] ** 2 - b[2] ** 2) / b[1] ** 2),
        _r(Z + Lam - (b[4] ** 2 - b[2] ** 2) / b[1] ** 2),
        _r(dLam - 2 * (Y + Z) * Lam - 2 * Y * Z),
    ]
    res += darboux_halphen_residual(t)
    res.append(lambda_halphen_residual(t))
    labels = ["x2", "x3", "x4", "x1p", "t1", "t1p", "t2", "t3", "t4", "lamX", "lamY", "lamZ", "lamdot",
              "dhX", "dhY", "dhZ", "halphen"]
    return SystemResidual("RENORM", (x, t.tau), res, tol, labels)


def darboux_halphen_residual(tau) -> list:
    """(1/2) Xdot = (Y+Z)X - YZ and cyclic, X, Y, Z = bold-tau log-derivatives of vartheta_2,3,4."""
    jets = constant_jets(tau, 3)
    s = 4 * pi * I
    L = [(j.deriv() / j.truncate(2)) * s for j in jets[:3]]
    X, Y, Z = (l.c[0] for l in L)
    dX, dY, dZ = (s * l.c[1] for l in L)
    return [_r(dX / 2 - ((Y + Z) * X - Y * Z)),
            _r(dY / 2 - ((X + Z) * Y - X * Z)),
            _r(dZ / 2 - ((X + Y) * Z - X * Y))]


def _halphen_form(Xj: Jet) -> float:
    x0, x1, x2, x3 = Xj.derivatives()[:4]
    return float(abs((x1 - 2 * x0 ** 2) * x3 - x2 ** 2 + 16 * x0 ** 3 * x2 + 4 * (x1 - 6 * x0 ** 2) * x1 ** 2))


def lambda_halphen_residual(tau, abcd=(1, 0, 0, 1), A1=1, A2=1) -> float:
    """Third-order Halphen equation on X = (i/4 pi) Lambda(tau), Lambda from the general integral."""
    ints = general_integral_T(tau, abcd, A1, A2, order=4)
    c2, c3, c4, eta = ints
    lam = (eta + (c3 ** 4 + c4 ** 4) * (pi ** 2 / 12)) * 4
    return _halphen_form(lam * (I / (4 * pi)))


# the general integral of the constant system with free A1, A2


def general_integral_T(tau, abcd=(1, 0, 0, 1), A1=1, A2=1, d_bold=1, order: int = 3):
    """Jets in tau of (vartheta_2, vartheta_3, vartheta_4, eta) solving the A-deformed constant system."""
    a, b, c, d = abcd
    if a * d - b * c != 1:
        raise ValueError("need ad - bc = 1")
    tau = mpc(getattr(tau, "tau", tau))
    A1, A2 = mpc(A1), mpc(A2)
    tj = Jet.variable(tau, order)
    w = tj * c + d
    T = (tj * a + b) / w
    if not T.c[0].imag > 0:
        raise ValueError("T(tau) must lie in the upper half-plane")
    cj = [j.compose(T) for j in constant_jets(T.c[0], order)]
    sw = w.sqrt()
    v2 = cj[0] / sw * d_bold
    v3 = cj[1] / sw / A1
    v4 = cj[2] / sw / A2
    corr = (cj[1] ** 4 * ((A1 ** 4 - 1) / A1 ** 4) + cj[2] ** 4 * ((A2 ** 4 - 1) / A2 ** 4)) * (pi ** 2 / 12)
    eta = (cj[3] + corr) / (w * w) + w.reciprocal() * (pi * I * c / 2)
    return v2, v3, v4, eta


def intA_rhs(c2, c3, c4, eta, A1, A2):
    k = pi ** 2 / 12
    a1, a2 = A1 ** 4, A2 ** 4
    return ((I / pi) * (eta + k * (c3 ** 4 + c4 ** 4)) * c2,
            (I / pi) * (eta + k * (c3 ** 4 + c4 ** 4 - 3 * a2 * c4 ** 4)) * c3,
            (I / pi) * (eta + k * (c3 ** 4 + c4 ** 4 - 3 * a1 * c3 ** 4)) * c4,
            (I / pi) * 2 * eta ** 2 - pi ** 3 / 72 * I * (c3 ** 8 + (9 * a1 * a2 - 6 * a1 - 6 * a2 + 2)
                                                          * c3 ** 4 * c4 ** 4 + c4 ** 8))


def residual_intA(tau, abcd=(1, 0, 1, 1), A1=1, A2=1, d_bold=1, tol: float = 1e-8) -> SystemResidual:
    """The A-deformed constant system along its general integral, plus dA3/dtau = 0."""
    jets = general_integral_T(tau, abcd, A1, A2, d_bold, order=2)
    vals = [j.c[0] for j in jets]
    rhs = intA_rhs(*vals, mpc(A1), mpc(A2))
    res = [_r(j.c[1] - r) for j, r in zip(jets, rhs)]
    a34 = (jets[1] ** 4 * mpc(A1) ** 4 - jets[2] ** 4 * mpc(A2) ** 4) / jets[0] ** 4
    res.append(_r(a34.c[1]))
    return SystemResidual("INT_A", (mpc(getattr(tau, "tau", tau)),), res, tol,
                          ["vartheta2", "vartheta3", "vartheta4", "eta", "dA3"])


def a3_drift(tau_start, tau_end, abcd=(1, 0, 1, 1), A1=1, A2=1, d_bold=1, samples: int = 9) -> float:
    """max |A3^4(tau) - A3^4(tau_start)| on a straight tau-segment."""
    t0, t1 = mpc(tau_start), mpc(tau_end)
    vals = []
    for j in range(samples):
        t = t0 + (t1 - t0) * j / (samples - 1)
        c2, c3, c4, _ = (x.c[0] for x in general_integral_T(t, abcd, A1, A2, d_bold, order=0))
        vals.append((mpc(A1) ** 4 * c3 ** 4 - mpc(A2) ** 4 * c4 ** 4) / c2 ** 4)
    return max(float(abs(v - vals[0])) for v in vals)


def a3_symmetric_drift(y0, tau0, tau1):
    """Drift of (A3^4 - 1) along the symmetric constant system from arbitrary initial data.

    Q = (vartheta_3^4 - vartheta_2^4 - vartheta_4^4)^3 / (vartheta_2^4 vartheta_3^4 vartheta_4^4)
    is the conserved quantity; returns (Q(tau0), max |Q(tau) - Q(tau0)|). The trajectory
    is integrated with mpmath's Taylor-series ODE solver.
    """
    from .diffsys import var_rhs

    tau0, tau1 = mpc(tau0), mpc(tau1)
    dt = tau1 - tau0

    def F(s, y):
        return [v * dt for v in var_rhs(*y)]

    sol = ctx.odefun(F, 0, [mpc(v) for v in y0])

    def Q(y):
        c2, c3, c4 = y[:3]
        return (c3 ** 4 - c2 ** 4 - c4 ** 4) ** 3 / (c2 ** 4 * c3 ** 4 * c4 ** 4)

    q0 = Q([mpc(v) for v in y0])
    drift = max(float(abs(Q(sol(ctx.mpf(s) / 8)) - q0)) for s in range(1, 9))
    return q0, drift


# the joint integral (mu = T)


def joint_solution(tau, abcd, A1=1, A2=1, d_bold=1, A=0, B=0, C=1):
    """(GeneralSolution, NoncanonicalParams) of the joint x/tau integral at tau, with mu = T."""
    a, b, c, d = abcd
    tau = mpc(getattr(tau, "tau", tau))
    w = c * tau + d
    T = (a * tau + b) / w
    c2, c3, c4, eta = (j.c[0] for j in general_integral_T(tau, abcd, A1, A2, d_bold, order=0))
    params = NoncanonicalParams(c2, c3, c4, eta, A1, A2)
    gs = GeneralSolution(A, mpc(A) / w + B, mpc(C) * w, 1 / w, T)
    return gs, params


def joint_values(x, tau, abcd, A1=1, A2=1, d_bold=1, A=0, B=0, C=1):
    gs, params = joint_solution(tau, abcd, A1, A2, d_bold, A, B, C)
    return general_solution_eval(gs, params, x), params


def joint_heat_residual(x, tau, abcd=(1, 0, 1, 1), A1=1, A2=1, d_bold=1, A=0, B=0, C=1,
                        tol: float = 1e-8) -> SystemResidual:
    """4 pi i d theta/d tau = theta_xx for the joint family; tau-derivative by Richardson differences."""
    x = mpc(x)
    tau = mpc(getattr(tau, "tau", tau))
    gs, params = joint_solution(tau, abcd, A1, A2, d_bold, A, B, C)
    res = []
    th = []
    xx = []
    for k in (1, 2, 3, 4):
        jet = family_jet(k, gs, params, x, 2)
        th.append(jet.c[0])
        xx.append(2 * jet.c[2])
    h = ctx.mpf("1e-4") * max(1, float(abs(tau)))
    for i, k in enumerate((1, 2, 3, 4)):
        dt = richardson_central(lambda s: joint_values(x, s, abcd, A1, A2, d_bold, A, B, C)[0][i], tau, h)
        res.append(_r(4 * pi * I * dt - xx[i]))
    # the tau-system with the free constants
    th1p = family_jet(1, gs, params, x, 1).c[1]
    rhs = tau_system_rhs(th, th1p, *params.thetas, params.eta)
    for i in range(4):
        dt = richardson_central(lambda s: joint_values(x, s, abcd, A1, A2, d_bold, A, B, C)[0][i], tau, h)
        res.append(_r(dt - rhs[i]))
    return SystemResidual("JOINT", (x, tau), res, tol,
                          ["heat1", "heat2", "heat3", "heat4", "tau1", "tau2", "tau3", "tau4"])


def flow_residual(tau, abcd=(1, 0, 1, 1), A1=1, A2=1) -> list:
    """Residuals of mu' = kappa^2 and pi i kappa'/kappa = 2M along the joint integral."""
    a, b, c, d = abcd
    tau = mpc(getattr(tau, "tau", tau))
    w = c * tau + d
    gs, params = joint_solution(tau, abcd, A1, A2)
    mu_dot = 1 / w ** 2
    kappa_dot_over = -c / w
    return [_r(mu_dot - gs.kappa ** 2), _r(pi * I * kappa_dot_over - 2 * gs.M(params))]


# modulus from the integrals


def j_of_params(params: NoncanonicalParams):
    c2, c3, c4 = params.thetas
    a1, a2, a3 = params.A1 ** 8, params.A2 ** 8, params.A3_4 ** 2
    num = (a1 * c3 ** 8 + a2 * c4 ** 8 + a3 * c2 ** 8) ** 3
    return num / (54 * a1 * a2 * a3 * c2 ** 8 * c3 ** 8 * c4 ** 8)


def mu_from_J(params: NoncanonicalParams):
    """A modulus mu (fundamental domain) with J(mu) given by the integrals."""
    return solve_j(j_of_params(params)).tau


def p_equation_residual(gs: GeneralSolution, params: NoncanonicalParams, x) -> float:
    """P = theta_2^2/theta_1^2 against P'^2 = 4 pi^2 (v4^2 P + A1^4 v3^2)(v3^2 P + A2^4 v4^2) P.

    Relative to max(1, |rhs|), since P has double poles.
    """
    j1 = family_jet(1, gs, params, x, 1)
    j2 = family_jet(2, gs, params, x, 1)
    if abs(j1.c[0]) < 1e-20:
        raise PoleAtLatticePoint("theta_1 of the family vanishes")
    P = (j2 / j1) ** 2
    c2, c3, c4 = params.thetas
    p0, p1 = P.c[0], P.c[1]
    rhs = 4 * pi ** 2 * (c4 ** 2 * p0 + params.A1 ** 4 * c3 ** 2) * (c3 ** 2 * p0 + params.A2 ** 4 * c4 ** 2) * p0
    return float(abs(p1 ** 2 - rhs)) / max(1.0, float(abs(rhs)))


def sn_ratio_residual(gs: GeneralSolution, params: NoncanonicalParams, x) -> float:
    """R = theta_1/theta_4 against its quartic first-order equation, relative to max(1, |rhs|)."""
    j1 = family_jet(1, gs, params, x, 1)
    j4 = family_jet(4, gs, params, x, 1)
    if abs(j4.c[0]) < 1e-20:
        raise PoleAtLatticePoint("theta_4 of the family vanishes")
    R = j1 / j4
    c2, c3, c4 = params.thetas
    r0, r1 = R.c[0], R.c[1]
    rhs = pi ** 2 * (params.A1 ** 4 * c3 ** 2 * r0 ** 2 - c2 ** 2) * (params.A3_4 * c2 ** 2 * r0 ** 2 - c3 ** 2)
    return float(abs(r1 ** 2 - rhs)) / max(1.0, float(abs(rhs)))


def klein_j_mu(gs: GeneralSolution):
    return klein_j(gs.mu)


__all__ = ["NoncanonicalParams", "GeneralSolution", "integrals_A", "params_from_family", "family_jet",
           "general_solution_eval", "family_x_residual", "residual_F_equation", "residual_w_equation",
           "theta_log_derivs", "wp_F_residual", "renormalized_systems_residual", "darboux_halphen_residual",
           "lambda_halphen_residual", "general_integral_T", "intA_rhs", "residual_intA", "a3_drift",
           "a3_symmetric_drift", "joint_solution", "joint_values", "joint_heat_residual", "flow_residual",
           "j_of_params", "mu_from_J", "p_equation_residual", "sn_ratio_residual", "ModMap"]
