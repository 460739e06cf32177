"""Weierstrass functions built on theta_1, with half-periods (1, tau) by default.

    sigma(x|tau) = theta_1(x/2) exp(eta x^2/2) / (pi eta_D^3)

where eta_D is the Dedekind eta and eta = zeta(1). Derivatives in x come from
term-wise differentiated theta series, so no lattice sums are involved.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._mp import ctx, mpc, pi, I
from .constants import eta_w, eta_w_dtau, g2_g3_lambert, theta_constants
from .errors import DegeneratePeriods, LatticePole, ZVanishes
from .jets import Jet
from .theta import UHTau, as_tau, theta_derivs

LATTICE_GUARD = 1e-6


@dataclass(frozen=True)
class WeierstrassPoint:
    x: object
    tau: UHTau
    sigma: object
    zeta: object
    wp: object
    wp_prime: object

    def cubic_residual(self, g2=None, g3=None) -> float:
        if g2 is None:
            g2, g3 = g2_g3_lambert(self.tau)
        return float(abs(self.wp_prime ** 2 - 4 * self.wp ** 3 + g2 * self.wp + g3))


def lattice_distance(x, tau) -> float:
    """Distance from x to the lattice 2Z + 2 tau Z (nearest of the 3x3 neighbouring cells)."""
    t = as_tau(tau)
    x = mpc(x)
    m0 = int(ctx.nint(x.imag / (2 * t.tau.imag)))
    best = float("inf")
    for m in (m0 - 1, m0, m0 + 1):
        n0 = int(ctx.nint((x - 2 * m * t.tau).real / 2))
        for n in (n0 - 1, n0, n0 + 1):
            best = min(best, float(abs(x - 2 * n - 2 * m * t.tau)))
    return best


def _guard(x, t):
    if lattice_distance(x, t) < LATTICE_GUARD:
        raise LatticePole(f"x = {x} lies within {LATTICE_GUARD:g} of a lattice point")


def _eta3(t):
    th2, th3, th4 = theta_constants(t)
    return th2 * th3 * th4 / 2


def sigma_from_theta(x, tau):
    """sigma(x|tau); entire, so no lattice guard."""
    t = as_tau(tau)
    x = mpc(x)
    th1 = theta_derivs(1, x / 2, t, [(0, 0)])[0]
    return th1 * ctx.exp(eta_w(t) * x ** 2 / 2) / (pi * _eta3(t))


def sigma_lambda(x, lam: int, omega=1, omega_prime=None, tau=None):
    """sigma_lambda(x|omega, omega') = theta_{lam+1}(x/2omega | omega'/omega)/vartheta_{lam+1} exp(eta x^2/2omega).

    Pass either ``tau`` (with omega = 1) or ``omega_prime``.
    """
    if lam not in (1, 2, 3):
        raise ValueError("lambda must be 1, 2 or 3")
    omega = mpc(omega)
    if tau is None:
        if omega_prime is None:
            raise ValueError("need tau or omega_prime")
        tau = mpc(omega_prime) / omega
    t = as_tau(tau)
    x = mpc(x)
    k = lam + 1
    num = theta_derivs(k, x / (2 * omega), t, [(0, 0)])[0]
    den = theta_derivs(k, 0, t, [(0, 0)])[0]
    eta = eta_w(t) / omega
    return num / den * ctx.exp(eta * x ** 2 / (2 * omega))


def _log_derivs(x, t):
    """(ln theta_1)^{(p)}(x/2) for p = 1..3 as jets of order 1 in tau."""
    f = theta_derivs(1, x / 2, t, [(p, r) for p in range(4) for r in range(2)])
    j = [Jet([f[2 * p], f[2 * p + 1]]) for p in range(4)]
    r1 = j[1] / j[0]
    r2 = j[2] / j[0]
    r3 = j[3] / j[0]
    l1 = r1
    l2 = r2 - r1 * r1
    l3 = r3 - r2 * r1 * 3 + r1 * r1 * r1 * 2
    return j[0], l1, l2, l3


def _wp_jets(x, t):
    """Jets (order 1 in tau) of sigma, zeta, wp, wp' obtained from theta series alone."""
    th1, l1, l2, l3 = _log_derivs(x, t)
    eta = Jet([eta_w(t), eta_w_dtau(t)])
    th2, th3, th4 = theta_constants(t)
    e3 = _eta3(t)
    eta3 = Jet([e3, 3 * I / pi * eta.c[0] * e3])
    sigma = th1 * (eta * (x ** 2 / 2)).exp() / (eta3 * pi)
    zeta = l1 / 2 + eta * x
    wp = -l2 / 4 - eta
    wpp = -l3 / 8
    return sigma, zeta, wp, wpp


def zeta_wp(x, tau) -> WeierstrassPoint:
    t = as_tau(tau)
    x = mpc(x)
    _guard(x, t)
    th1, l1, l2, l3 = _log_derivs(x, t)
    eta = eta_w(t)
    sigma = th1.c[0] * ctx.exp(eta * x ** 2 / 2) / (pi * _eta3(t))
    return WeierstrassPoint(x, t, sigma, l1.c[0] / 2 + eta * x, -l2.c[0] / 4 - eta, -l3.c[0] / 8)


def wp_from_thetas(x, tau):
    """wp(2x) from squared theta quotients (independent of the log-derivative route)."""
    t = as_tau(tau)
    x = mpc(x)
    th3, th4 = theta_constants(t)[1:]
    t1, t2 = (theta_derivs(k, x, t, [(0, 0)])[0] for k in (1, 2))
    if abs(t1) < 1e-20:
        raise LatticePole("theta_1 vanishes")
    return pi ** 2 / 12 * (th3 ** 4 + th4 ** 4) + pi ** 2 / 4 * th3 ** 2 * th4 ** 2 * t2 ** 2 / t1 ** 2


def tau_rhs(x, sigma, zeta, wp, wpp, eta, g2):
    """Closed tau-derivatives of (sigma, zeta, wp, wp') at fixed x."""
    c = I / pi
    return (c * (wp - zeta ** 2 + 2 * eta * (x * zeta - 1) - g2 * x ** 2 / 12) * sigma,
            c * (wpp + 2 * (zeta - x * eta) * wp + 2 * eta * zeta - g2 * x / 6),
            -c * (2 * (zeta - x * eta) * wpp + 4 * (wp - eta) * wp - ctx.mpf(2) / 3 * g2),
            -c * (6 * (wp - eta) * wpp + (zeta - x * eta) * (12 * wp ** 2 - g2)))


def tau_derivatives(x, tau):
    """(d sigma, d zeta, d wp, d wp')/d tau from the closed system."""
    p = zeta_wp(x, tau)
    g2, _ = g2_g3_lambert(p.tau)
    return tau_rhs(p.x, p.sigma, p.zeta, p.wp, p.wp_prime, eta_w(p.tau), g2)


def tau_derivatives_series(x, tau):
    """The same four derivatives from term-wise differentiated theta series."""
    t = as_tau(tau)
    x = mpc(x)
    _guard(x, t)
    return tuple(j.c[1] for j in _wp_jets(x, t))


@dataclass(frozen=True)
class PeriodPoint:
    """Values and all first derivatives in (omega, omega') at a point x."""

    x: object
    omega: object
    omega_prime: object
    s: int
    sigma: object
    zeta: object
    wp: object
    wp_prime: object
    eta: object
    eta_prime: object
    g2: object
    d_omega: tuple
    d_omega_prime: tuple


def _orient(omega, omega_prime):
    omega, omega_prime = mpc(omega), mpc(omega_prime)
    if omega == 0:
        raise DegeneratePeriods("omega = 0")
    r = omega_prime / omega
    if abs(r.imag) < 1e-24 * max(1.0, float(abs(r))):
        raise DegeneratePeriods("omega'/omega is real")
    s = 1 if r.imag > 0 else -1
    return omega, omega_prime, s, (r if s > 0 else -r)


def weierstrass_periods(x, omega, omega_prime):
    """(sigma, zeta, wp, wp', eta, eta', g2) for half-periods (omega, omega')."""
    omega, omega_prime, s, tau = _orient(omega, omega_prime)
    x = mpc(x)
    p = zeta_wp(x / omega, tau)
    eta = eta_w(tau) / omega
    eta_prime = (eta * omega_prime - s * pi * I / 2) / omega
    g2, _ = g2_g3_lambert(tau)
    return (omega * p.sigma, p.zeta / omega, p.wp / omega ** 2, p.wp_prime / omega ** 3,
            eta, eta_prime, g2 / omega ** 4, s)


def omega_derivatives(x, omega, omega_prime) -> PeriodPoint:
    sigma, zeta, wp, wpp, eta, etap, g2, s = weierstrass_periods(x, omega, omega_prime)
    omega, omega_prime = mpc(omega), mpc(omega_prime)
    x = mpc(x)
    c = I / pi * s

    def rows(w, e, sgn):
        return (sgn * c * (w * (wp - zeta ** 2 - g2 * x ** 2 / 12) + 2 * e * (x * zeta - 1)) * sigma,
                sgn * c * (2 * (w * zeta - x * e) * wp + w * (wpp - x * g2 / 6) + 2 * e * zeta),
                -sgn * c * (2 * (w * zeta - x * e) * wpp + 4 * (w * wp - e) * wp - ctx.mpf(2) / 3 * w * g2),
                -sgn * c * (6 * (w * wp - e) * wpp + (w * zeta - x * e) * (12 * wp ** 2 - g2)))

    # s is its own inverse, so s * d/domega = rhs gives d/domega = s * rhs
    return PeriodPoint(x, omega, omega_prime, s, sigma, zeta, wp, wpp, eta, etap, g2,
                       rows(omega_prime, etap, -1), rows(omega, eta, 1))


def sigma_heat_residual(x, tau) -> float:
    t = as_tau(tau)
    x = mpc(x)
    if x == 0:
        return 0.0
    p = zeta_wp(x, t)
    g2, _ = g2_g3_lambert(t)
    eta = eta_w(t)
    ds = tau_rhs(x, p.sigma, p.zeta, p.wp, p.wp_prime, eta, g2)[0]
    sx = p.zeta * p.sigma
    sxx = (p.zeta ** 2 - p.wp) * p.sigma
    return float(abs(pi * I * ds - (sxx - 2 * x * eta * sx + (2 * eta + g2 * x ** 2 / 12) * p.sigma)))


def _z_and_dz(x, tau):
    p = zeta_wp(x, tau)
    g2, g3 = g2_g3_lambert(p.tau)
    eta = eta_w(p.tau)
    dzeta = tau_rhs(p.x, p.sigma, p.zeta, p.wp, p.wp_prime, eta, g2)[1]
    deta = I / pi * (2 * eta ** 2 - g2 / 6)
    return p, eta, g2, g3, p.zeta - p.x * eta, dzeta - p.x * deta


def richardson_central(f, t0, h):
    """Central difference with one Richardson step (error O(h^4))."""
    d1 = (f(t0 + h) - f(t0 - h)) / (2 * h)
    d2 = (f(t0 + h / 2) - f(t0 - h / 2)) / h
    return (4 * d2 - d1) / 3


def z_relations_residual(x, tau):
    """Residuals of the two relations satisfied by Z = zeta - x eta as a function of tau."""
    t = as_tau(tau)
    x = mpc(x)
    p, eta, g2, g3, Z, Zt = _z_and_dz(x, t)
    if abs(Z) < 1e-12:
        raise ZVanishes("Z = zeta - x eta vanishes at this point")
    wp = p.wp
    r1 = abs((pi * I * Zt + 2 * (wp + eta) * Z) ** 2 - (4 * wp ** 3 - g2 * wp - g3))
    h = ctx.mpf("1e-4") * max(1, float(abs(t.tau)))
    Ztt = richardson_central(lambda s: _z_and_dz(x, s)[5], t.tau, h)
    lhs = -pi ** 2 / 8 * Ztt / Z
    rhs = (pi * I / 2 * (Z ** 2 + wp - 2 * eta) * Zt / Z + (wp + eta) * Z ** 2
           - wp ** 2 + eta * wp - eta ** 2 + g2 / 4)
    return float(r1), float(abs(lhs - rhs))
