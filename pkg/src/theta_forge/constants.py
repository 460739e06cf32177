"""Theta constants, Dedekind and Weierstrass eta, invariants g2, g3, Klein J.

Normalization: the half-periods are (1, tau), so g2(tau) = g2(1, tau) and
eta(tau) = zeta(1 | 1, tau).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from ._mp import ctx, mpc, pi, I
from .errors import DegenerateCurve, NoConvergence, TailNotConverged
from .modmap import ModMap
from .theta import DEFAULT_BUDGET, Bounded, SeriesBudget, UHTau, as_tau, char_series


def _bracket(k: int) -> int:
    return -1 if k % 2 else 1


def theta_constants(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """(vartheta_2, vartheta_3, vartheta_4) at tau."""
    t = as_tau(tau)
    return tuple(char_series(a, b, 0, t, ((0, 0),), budget)[0].value
                 for a, b in ((1, 0), (0, 0), (0, 1)))


def theta_constant_char(alpha: int, beta: int, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """vartheta[alpha, beta] with any integer characteristic."""
    return char_series(alpha, beta, 0, tau, ((0, 0),), budget)[0].value


def _geometric_tail(lead_log: float, ratio_log: float) -> float:
    if ratio_log >= 0:
        return math.inf
    if lead_log < -700:
        return 0.0
    return math.exp(lead_log) / (-math.expm1(ratio_log))


def _lambert(tau: UHTau, budget: SeriesBudget, power: int, denom_power: int, deriv: bool = False):
    """sum_{k>=1} k^power Q^k / (1 - Q^k)^denom_power with Q = exp(2 pi i tau).

    With ``deriv`` the tau-derivative of the same sum is returned as well.
    """
    Q = ctx.exp(2 * pi * I * tau.tau)
    rq = float(abs(Q))
    total = ctx.mpc(0)
    dtotal = ctx.mpc(0)
    Qk = ctx.mpc(1)
    k = 0
    while True:
        k += 1
        if k > 4 * budget.max_terms:
            raise TailNotConverged("Lambert series did not converge; reduce tau first")
        Qk *= Q
        one_minus = 1 - Qk
        total += ctx.mpf(k) ** power * Qk / one_minus ** denom_power
        if deriv:
            # d/dtau Q^k = 2 pi i k Q^k;  d/dQk [Qk/(1-Qk)^p] = (1 + (p-1) Qk)/(1-Qk)^(p+1)
            dtotal += (ctx.mpf(k) ** power * 2 * pi * I * k * Qk
                       * (1 + (denom_power - 1) * Qk) / one_minus ** (denom_power + 1))
        if k >= 2:
            pw = power + (2 if deriv else 0)
            n0 = k + 1
            lead = pw * math.log(n0) + n0 * math.log(rq) - (denom_power + 1) * math.log1p(-rq)
            ratio = pw * math.log1p(1.0 / n0) + math.log(rq)
            if _geometric_tail(lead, ratio) * 1e4 <= budget.abs_tol:
                break
    return (total, dtotal) if deriv else total


def g2_g3_lambert(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """Invariants g2, g3 of the lattice with half-periods (1, tau)."""
    t = as_tau(tau)
    s3 = _lambert(t, budget, 3, 1)
    s5 = _lambert(t, budget, 5, 1)
    g2 = 20 * pi ** 4 * (ctx.mpf(1) / 240 + s3)
    g3 = ctx.mpf(7) / 3 * pi ** 6 * (ctx.mpf(1) / 504 - s5)
    return g2, g3


def g2_g3_dtau_lambert(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """Term-wise tau-derivatives (dg2/dtau, dg3/dtau) of the Lambert series."""
    t = as_tau(tau)
    _, d3 = _lambert(t, budget, 3, 1, deriv=True)
    _, d5 = _lambert(t, budget, 5, 1, deriv=True)
    return 20 * pi ** 4 * d3, -ctx.mpf(7) / 3 * pi ** 6 * d5


def eta_w(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """Weierstrass eta(tau) = zeta(1 | 1, tau)."""
    t = as_tau(tau)
    return 2 * pi ** 2 * (ctx.mpf(1) / 24 - _lambert(t, budget, 0, 2))


def eta_w_dtau(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    t = as_tau(tau)
    _, d = _lambert(t, budget, 0, 2, deriv=True)
    return -2 * pi ** 2 * d


def eta_dedekind_bounded(tau, budget: SeriesBudget = DEFAULT_BUDGET) -> Bounded:
    """Dedekind eta from Euler's pentagonal series."""
    t = as_tau(tau)
    rq = float(abs(t.q))
    a = pi * I * t.tau
    total = ctx.mpc(1)
    k = 0
    while True:
        k += 1
        if k > budget.max_terms:
            raise TailNotConverged("pentagonal series did not converge; reduce tau first")
        sgn = -1 if k % 2 else 1
        total += sgn * (ctx.exp(a * (3 * k * k + k)) + ctx.exp(a * (3 * k * k - k)))
        n0 = k + 1
        tail = 2 * _geometric_tail((3 * n0 * n0 - n0) * math.log(rq), math.log(rq))
        if tail <= budget.abs_tol:
            break
    pref = ctx.exp(a / 12)
    return Bounded(pref * total, float(abs(pref)) * tail)


def eta_dedekind(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    return eta_dedekind_bounded(tau, budget).value


def eta_dedekind_product(tau, terms: int = 400):
    """Product form e^{pi i tau/12} prod (1 - e^{2 k pi i tau}); used as a cross-check."""
    t = as_tau(tau)
    Q = ctx.exp(2 * pi * I * t.tau)
    out = ctx.exp(pi * I * t.tau / 12)
    Qk = ctx.mpc(1)
    for _ in range(terms):
        Qk *= Q
        out *= 1 - Qk
        if abs(Qk) < ctx.mpf(10) ** (-ctx.dps - 5):
            break
    return out


def eta_from_theta1(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """eta = -(1/12) theta_1'''(0)/theta_1'(0)."""
    from .theta import theta_derivs

    d1, d3 = theta_derivs(1, 0, tau, [(1, 0), (3, 0)], budget)
    return -d3 / (12 * d1)


# (alpha, beta)-representations of the invariants and of the branch points


def _ab_pair(alpha: int, beta: int, th2, th3, th4):
    """(vartheta_{alpha 0}, vartheta_{0 beta}) as fourth-power bases."""
    ta0 = th2 if alpha % 2 else th3
    t0b = th4 if beta % 2 else th3
    return ta0, t0b


def g2_from_thetas(alpha: int, beta: int, th2, th3, th4):
    ta0, t0b = _ab_pair(alpha, beta, th2, th3, th4)
    u, v = ta0 ** 4, t0b ** 4
    return pi ** 4 / 12 * (u * u + _bracket(alpha + beta) * u * v + v * v)


def g3_from_thetas(alpha: int, beta: int, th2, th3, th4):
    ta0, t0b = _ab_pair(alpha, beta, th2, th3, th4)
    u, v = ta0 ** 4, t0b ** 4
    ba, bb = _bracket(alpha), _bracket(beta)
    return pi ** 6 / 432 * (2 * bb * u ** 3 - 3 * u * v * (bb * v - ba * u) - 2 * ba * v ** 3)


def e_branch(gamma: int, delta: int, th2, th3, th4):
    """e_{gamma delta} = (pi^2/12)(<gamma> vartheta_{0 delta}^4 - <delta> vartheta_{gamma 0}^4)."""
    t0d = th4 if delta % 2 else th3
    tg0 = th2 if gamma % 2 else th3
    if gamma % 2 == 0 and delta % 2 == 0:
        return ctx.mpc(0)
    return pi ** 2 / 12 * (_bracket(gamma) * t0d ** 4 - _bracket(delta) * tg0 ** 4)


@dataclass(frozen=True)
class BranchPoints:
    e1: object
    e2: object
    e3: object

    def as_tuple(self):
        return (self.e1, self.e2, self.e3)


def branch_points(tau, budget: SeriesBudget = DEFAULT_BUDGET) -> BranchPoints:
    th2, th3, th4 = theta_constants(tau, budget)
    return BranchPoints(e_branch(0, 1, th2, th3, th4), e_branch(1, 1, th2, th3, th4),
                        e_branch(1, 0, th2, th3, th4))


@dataclass(frozen=True)
class ConstantPack:
    tau: UHTau
    vartheta2: object
    vartheta3: object
    vartheta4: object
    eta_w: object
    eta_d: object
    g2: object
    g3: object

    @property
    def thetas(self):
        return (self.vartheta2, self.vartheta3, self.vartheta4)

    @property
    def discriminant(self):
        return self.g2 ** 3 - 27 * self.g3 ** 2

    @property
    def degenerate(self) -> bool:
        return abs(self.discriminant) <= 1e-20 * (abs(self.g2) ** 3 + 1)


@functools.lru_cache(maxsize=4096)
def _pack_cached(tau_key: tuple, abs_tol: float, max_terms: int) -> ConstantPack:
    t = UHTau.of(ctx.mpc(ctx.mpf(tau_key[0]), ctx.mpf(tau_key[1])))
    budget = SeriesBudget(abs_tol, max_terms)
    th2, th3, th4 = theta_constants(t, budget)
    g2, g3 = g2_g3_lambert(t, budget)
    return ConstantPack(t, th2, th3, th4, eta_w(t, budget), eta_dedekind(t, budget), g2, g3)


def constant_pack(tau, budget: SeriesBudget = DEFAULT_BUDGET) -> ConstantPack:
    """All constants at tau; memoized (lru_cache is safe for concurrent readers)."""
    t = as_tau(tau)
    key = (ctx.nstr(t.tau.real, ctx.dps + 5, strip_zeros=False),
           ctx.nstr(t.tau.imag, ctx.dps + 5, strip_zeros=False))
    return _pack_cached(key, budget.abs_tol, budget.max_terms)


# fundamental domain and the J-invariant


def fundamental_domain_reduce(tau) -> tuple[UHTau, ModMap]:
    """Return (tau*, g) with tau* = g(tau) in the standard fundamental domain."""
    t = as_tau(tau).tau
    g = ModMap.identity()
    for _ in range(10000):
        n = int(ctx.floor(t.real + ctx.mpf(1) / 2))
        if n:
            t = t - n
            g = ModMap.T(-n) @ g
        if abs(t) < 1:
            t = -1 / t
            g = ModMap.S() @ g
            continue
        break
    else:  # pragma: no cover - Im strictly grows, so this is unreachable
        raise NoConvergence("fundamental domain reduction did not terminate")
    # boundary ties go to Re <= 0
    if t.real == ctx.mpf(1) / 2:
        t -= 1
        g = ModMap.T(-1) @ g
    if abs(t) == 1 and t.real > 0:
        t = -1 / t
        g = ModMap.S() @ g
    return UHTau.of(t), g


def klein_j(tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """J = g2^3/(g2^3 - 27 g3^2), evaluated after fundamental-domain reduction."""
    red, _ = fundamental_domain_reduce(tau)
    g2, g3 = g2_g3_lambert(red, budget)
    return g2 ** 3 / (g2 ** 3 - 27 * g3 ** 2)


def _j_and_derivative(t: UHTau, budget: SeriesBudget):
    g2, g3 = g2_g3_lambert(t, budget)
    d2, d3 = g2_g3_dtau_lambert(t, budget)
    disc = g2 ** 3 - 27 * g3 ** 2
    j = g2 ** 3 / disc
    dj = 27 * g2 ** 2 * g3 * (2 * g2 * d3 - 3 * g3 * d2) / disc ** 2
    return j, dj


def _newton_j(target, seed, budget: SeriesBudget, maxiter: int = 80):
    t = mpc(seed)
    tol = ctx.mpf(10) ** (-ctx.dps + 6) * max(1, abs(target))
    for _ in range(maxiter):
        if not t.imag > 0:
            return None
        red, _ = fundamental_domain_reduce(t)
        t = red.tau
        j, dj = _j_and_derivative(red, budget)
        err = j - target
        if abs(err) <= tol:
            return red
        if dj == 0:
            return None
        step = err / dj
        # damp steps that would leave the half-plane
        while not (t - step).imag > 0:
            step /= 2
        t = t - step
    return None


def _agm_seed(target):
    """Starting point for Newton: tau = i K'/K from the roots of a cubic with J = target.

    A lattice with J = target is 4z^3 - g2 z - g3 with g2 = g3 = 27 J/(J-1)
    (for J != 0, 1); its roots give the modulus k^2 and tau = i K'/K.
    """
    if target == 0 or target == 1:
        return None
    c = 27 * target / (target - 1)
    try:
        roots = ctx.polyroots([4, 0, -c, -c], maxsteps=200, extraprec=60)
    except ctx.NoConvergence:
        return None
    import itertools

    for e1, e2, e3 in itertools.permutations(roots):
        m = (e2 - e3) / (e1 - e3)
        try:
            tau = I * ctx.ellipk(1 - m) / ctx.ellipk(m)
        except (ValueError, ZeroDivisionError):
            continue
        if tau.imag > 1e-6:
            return tau
    return None


EPS_CUBE = ctx.mpc(-0.5, ctx.sqrt(3) / 2)


def solve_j(target, budget: SeriesBudget = DEFAULT_BUDGET) -> UHTau:
    """Solve J(tau) = target for tau in the fundamental domain."""
    target = mpc(target)
    seeds = [s for s in (_agm_seed(target),) if s is not None]
    seeds += [ctx.mpc(0, 1), EPS_CUBE + ctx.mpc(0, 0.05), ctx.mpc(0.5, 1.2)]
    eps = ctx.mpf(10) ** (-ctx.dps + 5)
    if abs(target) < eps:
        return UHTau.of(EPS_CUBE)
    if abs(target - 1) < eps:
        return UHTau.of(ctx.mpc(0, 1))
    for seed in seeds:
        res = _newton_j(target, seed, budget)
        if res is not None:
            return res
    raise NoConvergence(f"could not solve J(tau) = {target}")


def lemniscatic_periods(a, budget: SeriesBudget = DEFAULT_BUDGET):
    """Half-periods of w^2 = 4z^3 - a z (b = 0): omega_L = (8a)^(-1/4) pi vartheta_4(2i)^2."""
    a = mpc(a)
    th4 = char_series(0, 1, 0, ctx.mpc(0, 2), ((0, 0),), budget)[0].value
    om = (8 * a) ** (-ctx.mpf(1) / 4) * pi * th4 ** 2
    return om, I * om


def equianharmonic_periods(b, budget: SeriesBudget = DEFAULT_BUDGET):
    """Half-periods of w^2 = 4z^3 - b (a = 0): omega_E = (-27 b^2)^(-1/12) pi eta_D(eps)^2.

    The principal twelfth root fixes omega only up to a sixth root of -1
    acting on g3; the root is rotated by e^{i pi/6} when needed so that
    g3(omega, omega') = b exactly.
    """
    b = mpc(b)
    eta_e = eta_dedekind(EPS_CUBE, budget)
    om = (-27 * b * b) ** (-ctx.mpf(1) / 12) * pi * eta_e ** 2
    _, g3e = g2_g3_lambert(EPS_CUBE, budget)
    if abs(g3e / om ** 6 - b) > abs(g3e / om ** 6 + b):
        om *= ctx.exp(pi * I / 6)
    return om, EPS_CUBE * om


def modular_inversion(a, b, budget: SeriesBudget = DEFAULT_BUDGET):
    """Half-periods (omega, omega') with g2(omega, omega') = a, g3(omega, omega') = b."""
    a, b = mpc(a), mpc(b)
    disc = a ** 3 - 27 * b ** 2
    scale = abs(a) ** 3 + 27 * abs(b) ** 2
    if scale == 0 or abs(disc) <= 1e-24 * scale:
        raise DegenerateCurve("a^3 = 27 b^2: the curve is singular")
    if b == 0:
        return lemniscatic_periods(a, budget)
    if a == 0:
        return equianharmonic_periods(b, budget)
    # near J = 0 or 1 the tau solve loses about half the working digits
    with ctx.extradps(30):
        t = solve_j(a ** 3 / (a ** 3 - 27 * b ** 2), budget)
        g2, g3 = g2_g3_lambert(t, budget)
        # take omega from whichever invariant is far from zero, then pick the
        # root of unity that reproduces the other one
        if abs(g2) ** 3 >= 27 * abs(g3) ** 2:
            base = (g2 / a) ** (ctx.mpf(1) / 4)
            cands = [base * I ** k for k in range(4)]
        else:
            base = (g3 / b) ** (ctx.mpf(1) / 6)
            cands = [base * ctx.expjpi(ctx.mpf(k) / 3) for k in range(6)]
        s2 = abs(a) + abs(b) ** (ctx.mpf(2) / 3)
        s3 = abs(b) + abs(a) ** (ctx.mpf(3) / 2)
        om = min(cands, key=lambda o: abs(g2 / o ** 4 - a) / s2 + abs(g3 / o ** 6 - b) / s3)
        omp = t.tau * om
    return +om, +omp


def invariants_of_periods(omega, omega_prime, budget: SeriesBudget = DEFAULT_BUDGET):
    """(g2, g3) of the lattice with half-periods (omega, omega') by homogeneity."""
    om, omp = mpc(omega), mpc(omega_prime)
    if (omp / om).imag < 0:
        omp = -omp
    tau = omp / om
    if tau.imag == 0:
        from .errors import DegeneratePeriods

        raise DegeneratePeriods("omega'/omega is real")
    red, g = fundamental_domain_reduce(tau)
    # same lattice, reduced basis
    om_new = g.c * omp + g.d * om
    g2, g3 = g2_g3_lambert(red, budget)
    return g2 / om_new ** 4, g3 / om_new ** 6
