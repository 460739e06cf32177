"""Jacobi theta functions straight from their q-series.

Conventions: theta_1 is odd with theta_1'(0) = pi*theta_2*theta_3*theta_4, and
the characteristic series is

    theta[a, b](x|tau) = sum_k exp(pi*i*(k + a/2)**2*tau + 2*pi*i*(k + a/2)*(x + b/2)),

so that theta[1,1] = -theta_1, theta[1,0] = theta_2, theta[0,0] = theta_3 and
theta[0,1] = theta_4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ._mp import ctx, mpc, pi, I
from .errors import PoleAtLatticePoint, TailNotConverged


@dataclass(frozen=True)
class UHTau:
    """A point of the upper half-plane together with its nome q = exp(pi*i*tau)."""

    tau: object
    q: object
    im_floor: float

    @classmethod
    def of(cls, value) -> "UHTau":
        if isinstance(value, UHTau):
            return value
        t = mpc(value)
        if not t.imag > 0:
            raise ValueError(f"tau must lie in the upper half-plane, got {t}")
        return cls(t, ctx.exp(pi * I * t), float(t.imag))

    def __complex__(self):
        return complex(self.tau)


def as_tau(value) -> UHTau:
    return UHTau.of(value)


@dataclass(frozen=True)
class ThetaChar:
    """Integer characteristic [alpha, beta]."""

    alpha: int
    beta: int

    def reduced(self) -> tuple["ThetaChar", int]:
        """Return the {0,1}-representative and the sign s with theta[self] = s*theta[rep]."""
        a0, b0 = self.alpha % 2, self.beta % 2
        n = (self.beta - b0) // 2
        sign = -1 if (a0 * n) % 2 else 1
        return ThetaChar(a0, b0), sign

    @property
    def parity(self) -> int:
        """epsilon = (<alpha*beta> + 1)/2: 1 for even characteristics, 0 for odd."""
        return 0 if (self.alpha * self.beta) % 2 else 1

    def __iter__(self):
        yield self.alpha
        yield self.beta


@dataclass(frozen=True)
class SeriesBudget:
    abs_tol: float = 1e-25
    max_terms: int = 256

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be at least 8")


DEFAULT_BUDGET = SeriesBudget()


class Bounded(NamedTuple):
    value: object
    error: float


# theta_k = sign * theta[char]
INDEX_CHAR = {1: (ThetaChar(1, 1), -1), 2: (ThetaChar(1, 0), 1),
              3: (ThetaChar(0, 0), 1), 4: (ThetaChar(0, 1), 1)}


def char_of(k: int) -> tuple[ThetaChar, int]:
    try:
        return INDEX_CHAR[k]
    except KeyError:
        raise ValueError(f"theta index must be 1..4, got {k}") from None


def _log_envelope(n: float, im_tau: float, im_x: float, p: int, r: int) -> float:
    """log of an upper bound for |d^p_x d^r_tau| of the term with index n."""
    out = -math.pi * n * n * im_tau + 2 * math.pi * n * abs(im_x)
    if n > 0:
        out += p * math.log(2 * math.pi * n) + r * math.log(math.pi * n * n)
    return out


def _tail_bound(n0: float, im_tau: float, im_x: float, p: int, r: int) -> float:
    """Bound on both tails sum_{|n| >= n0} of the derivative series, or inf."""
    ratio = -math.pi * im_tau * (2 * n0 + 1) + 2 * math.pi * abs(im_x)
    if n0 > 0:
        ratio += (p + 2 * r) * math.log1p(1.0 / n0)
    if ratio >= 0:
        return math.inf
    lead = _log_envelope(n0, im_tau, im_x, p, r)
    if lead < -700:
        return 0.0
    return 2 * math.exp(lead) / (-math.expm1(ratio))


def char_series(alpha: int, beta: int, x, tau, orders=((0, 0),),
                budget: SeriesBudget = DEFAULT_BUDGET) -> list[Bounded]:
    """Sum the characteristic series and its term-wise derivatives directly.

    ``orders`` lists (p, r) pairs meaning d^p/dx^p d^r/dtau^r. Any integers
    are accepted for (alpha, beta); no reduction law is used here, which makes
    this routine the reference the reduction bookkeeping is tested against.
    """
    t = as_tau(tau)
    x = mpc(x)
    s = alpha % 2
    half = ctx.mpf(s) / 2
    xb = x + ctx.mpf(beta) / 2
    im_tau = t.im_floor
    im_x = float(x.imag)
    a_pi_tau = pi * I * t.tau
    two_pi_i_x = 2 * pi * I * xb
    sums = [ctx.mpc(0) for _ in orders]
    absum = [0.0 for _ in orders]
    prec_eps = 2.0 ** (-ctx.prec + 4)

    def add(n):
        e = ctx.exp(a_pi_tau * n * n + two_pi_i_x * n)
        for j, (p, r) in enumerate(orders):
            term = e
            if p:
                term = term * (2 * pi * I * n) ** p
            if r:
                term = term * (pi * I * n * n) ** r
            sums[j] += term
            absum[j] += float(abs(term))

    level = 0
    while True:
        if level >= budget.max_terms:
            raise TailNotConverged(
                f"theta series needs more than {budget.max_terms} terms at Im tau={im_tau:g}; "
                "reduce tau to the fundamental domain first")
        mag = level + half
        if mag == 0:
            add(ctx.mpf(0))
        else:
            add(mag)
            add(-mag)
        level += 1
        n0 = float(level + half)
        bounds = [_tail_bound(n0, im_tau, im_x, p, r) for p, r in orders]
        if max(bounds) <= budget.abs_tol and level >= 2:
            break
    return [Bounded(v, b + a * prec_eps) for v, b, a in zip(sums, bounds, absum)]


def _reduced_series(ch: ThetaChar, x, tau, orders, budget):
    rep, sign = ThetaChar(*ch).reduced()
    out = char_series(rep.alpha, rep.beta, x, tau, orders, budget)
    if sign == 1:
        return out
    return [Bounded(-b.value, b.error) for b in out]


def theta_char_bounded(ch, x, tau, budget: SeriesBudget = DEFAULT_BUDGET) -> Bounded:
    return _reduced_series(ThetaChar(*ch), x, tau, ((0, 0),), budget)[0]


def theta_char_q(ch, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """theta[alpha, beta](x|tau), characteristic reduced to {0,1}^2 with tracked sign."""
    return theta_char_bounded(ch, x, tau, budget).value


def theta_bounded(k: int, x, tau, budget: SeriesBudget = DEFAULT_BUDGET) -> Bounded:
    ch, sign = char_of(k)
    b = char_series(ch.alpha, ch.beta, x, tau, ((0, 0),), budget)[0]
    return Bounded(sign * b.value, b.error)


def theta_q(k: int, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """theta_k(x|tau) for k = 1..4 by symmetric summation of the q-series."""
    return theta_bounded(k, x, tau, budget).value


def theta_derivs(k: int, x, tau, orders, budget: SeriesBudget = DEFAULT_BUDGET) -> list:
    """Values of d^p_x d^r_tau theta_k for each (p, r) in ``orders``."""
    ch, sign = char_of(k)
    return [sign * b.value for b in char_series(ch.alpha, ch.beta, x, tau, tuple(orders), budget)]


def theta_char_derivs(ch, x, tau, orders, budget: SeriesBudget = DEFAULT_BUDGET) -> list:
    return [b.value for b in _reduced_series(ThetaChar(*ch), x, tau, tuple(orders), budget)]


def theta_jet(k: int, x, tau, max_order: int, budget: SeriesBudget = DEFAULT_BUDGET) -> list:
    """[theta_k, theta_k', ..., theta_k^(max_order)] at x."""
    return theta_derivs(k, x, tau, [(p, 0) for p in range(max_order + 1)], budget)


def theta_dx_q(k: int, x, tau, order: int, budget: SeriesBudget = DEFAULT_BUDGET):
    """order-th x-derivative of theta_k by term-wise differentiation (order <= 8)."""
    if not 1 <= order <= 8:
        raise ValueError("order must be between 1 and 8")
    return theta_derivs(k, x, tau, [(order, 0)], budget)[0]


def _ipow(k: int):
    return (1, I, -1, -I)[k % 4]


def shift_half_periods(ch, n: int, m: int, x, tau):
    """Express theta[ch](x + n/2 + m*tau/2) as prefactor * theta[new_char](x).

    The new characteristic is reduced to {0,1}^2; the reduction sign is folded
    into the prefactor.
    """
    a, b = ThetaChar(*ch)
    t = as_tau(tau)
    x = mpc(x)
    new, sign = ThetaChar(a + m, b + n).reduced()
    pref = _ipow(-(b + n) * m) * sign * ctx.exp(-(pi * I / 4) * m * (4 * x + m * t.tau))
    return new, pref


def reduce_x(ch, x, tau):
    """Shift x by a lattice vector n + m*tau into the fundamental cell.

    Returns (x_red, prefactor, (n, m)) with theta[ch](x) = prefactor * theta[ch](x_red).
    """
    a, b = ThetaChar(*ch)
    t = as_tau(tau)
    x = mpc(x)
    m = int(ctx.nint(x.imag / t.tau.imag))
    n = int(ctx.nint((x - m * t.tau).real))
    xr = x - n - m * t.tau
    sign = -1 if (n * a - m * b) % 2 else 1
    pref = sign * ctx.exp(-pi * I * m * (2 * xr + m * t.tau))
    return xr, pref, (n, m)


def _bracket(k: int) -> int:
    return -1 if k % 2 else 1


def theta_dx_shifted(ch, n: int, m: int, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """d/dx theta[ch] at x + n/2 + m*tau/2, assembled from unshifted values at x."""
    a, b = ThetaChar(*ch)
    t = as_tau(tau)
    x = mpc(x)
    th1, th1p = theta_derivs(1, x, t, [(0, 0), (1, 0)], budget)
    if abs(th1) < 1e-20:
        raise PoleAtLatticePoint("theta_1 vanishes at x; use theta_const_dx_shifted")
    am, bn = a + m, b + n

    def tc(p, q, z=x):
        return theta_char_q((p, q), z, t, budget)

    main = (th1p - pi * I * m * th1) * tc(am, bn)
    corr = _bracket(am * (bn // 2)) * pi * tc(am, bn, 0) ** 2 * tc(1 - am, 0) * tc(0, 1 - bn)
    pref = _ipow(3 * m * bn) * ctx.exp(-(pi * I / 4) * m * (4 * x + m * t.tau))
    return pref * (main - corr) / th1


def theta_const_dx_shifted(ch, n: int, m: int, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """d/dx theta[ch] at the half period (n + m*tau)/2 in closed form."""
    from .constants import eta_dedekind

    a, b = ThetaChar(*ch)
    t = as_tau(tau)
    eta3 = eta_dedekind(t, budget) ** 3
    am, bn = a + m, b + n
    inner = _ipow(bn) * (1 - _bracket(am * bn)) * eta3 - m * theta_char_q((am, bn), 0, t, budget)
    return _ipow(1 - bn * m) * pi * inner * ctx.exp(-pi * I * m * m * t.tau / 4)
