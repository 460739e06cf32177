"""PSL(2, Z) transformation laws and multiplication formulas.

Multipliers are kept as exact integer exponents of a root of unity, so
composition never accumulates floating error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._mp import ctx, mpc, pi, I
from .constants import fundamental_domain_reduce, theta_constants
from .errors import ZeroDenominator
from .modmap import ModMap
from .theta import DEFAULT_BUDGET, SeriesBudget, ThetaChar, as_tau, char_of, char_series, reduce_x, theta_q

__all__ = ["ModMap", "Multiplier8", "multiplier_exponent", "multiplier_epsilon", "eta_multiplier",
           "transform_theta1", "transform_theta_ab", "transport_char", "transform_eta",
           "theta_char_reduced", "theta_reduced", "multiply_argument", "multiplication_identity_residual"]


@dataclass(frozen=True)
class Multiplier8:
    """exp(2 pi i * exponent_num / 8)."""

    exponent_num: int

    def __post_init__(self):
        object.__setattr__(self, "exponent_num", int(self.exponent_num) % 8)

    @property
    def value(self):
        return ctx.expjpi(ctx.mpf(self.exponent_num) / 4)

    def __mul__(self, other: "Multiplier8") -> "Multiplier8":
        return Multiplier8(self.exponent_num + other.exponent_num)

    def __pow__(self, k: int) -> "Multiplier8":
        return Multiplier8(self.exponent_num * k)


def _sign(d: int) -> int:
    # d = 0 only happens for c = 1, where the (c - 1)/4 factor removes the term
    return -1 if d < 0 else 1


def multiplier_exponent(m: ModMap) -> Fraction:
    """E with theta_1 multiplier exp(3 pi i E) and eta multiplier exp(pi i E), for c > 0."""
    a, b, c, d = m.as_tuple()
    if c <= 0:
        raise ValueError("multiplier_exponent needs c > 0")
    dsum = sum(k * ((d * k) // c) for k in range(1, c))
    return (Fraction(a - d, 12 * c) - Fraction(d * (2 * c - 3), 6) + Fraction((c - 1) * _sign(d), 4)
            - Fraction(1, 4) + Fraction(dsum, c))


def _twelve_e(m: ModMap) -> tuple[int, int]:
    """(12E for a map with d >= 0, shift k) where m = m' o T^-k.

    The closed exponent is only reliable for d >= 0; for d < 0 the map is
    written as m' o T^-k with d' = d + k c > 0 and the translation is applied
    separately.
    """
    k = 0
    if m.d < 0:
        k = (-m.d) // m.c + 1
        m = m @ ModMap.T(k)
    twelve_e = 12 * multiplier_exponent(m)
    if twelve_e.denominator != 1:
        raise AssertionError(f"12E = {twelve_e} is not an integer for {m}")
    return twelve_e.numerator, k


def multiplier_epsilon(m: ModMap) -> Multiplier8:
    if m.c == 0:
        return Multiplier8(m.b)  # exp(pi i N/4)
    e, k = _twelve_e(m)
    return Multiplier8(e - k)


def eta_multiplier(m: ModMap) -> int:
    """Exponent j with eta multiplier exp(2 pi i j/24)."""
    if m.c == 0:
        return m.b % 24
    e, k = _twelve_e(m)
    return (e - k) % 24


def _root24(j: int):
    return ctx.expjpi(ctx.mpf(j % 24) / 12)


def _frame(m: ModMap, x, tau):
    t = as_tau(tau)
    x = mpc(x)
    w = m.cocycle(t)
    return t, x, w, ctx.sqrt(w) * ctx.exp(pi * I * m.c * x ** 2 / w)


def transform_theta1(m: ModMap, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """theta_1(x/(c tau + d) | m(tau)) assembled from theta_1(x|tau)."""
    t, x, _, fac = _frame(m, x, tau)
    return multiplier_epsilon(m).value * fac * theta_q(1, x, t, budget)


def transform_eta(m: ModMap, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """Dedekind eta at m(tau) from eta(tau)."""
    from .constants import eta_dedekind

    t = as_tau(tau)
    return _root24(eta_multiplier(m)) * ctx.sqrt(m.cocycle(t)) * eta_dedekind(t, budget)


def transport_char(m: ModMap, ch) -> tuple[ThetaChar, int, int]:
    """Transport [alpha-1, beta-1] -> [alpha~-1, beta~-1].

    Returns (reduced new characteristic, its reduction sign, extra phase
    exponent in units of 2 pi i/8). The lift alpha = ch.alpha + 1 is used.
    """
    a, b, c, d = m.as_tuple()
    al, be = ThetaChar(*ch).alpha + 1, ThetaChar(*ch).beta + 1
    at, bt = d * al - c * be, -b * al + a * be
    new, sign = ThetaChar(at - 1, bt - 1).reduced()
    if c == 0:
        phase = -b * al * al  # with epsilon = exp(pi i N/4) this gives exp(pi i N (1-alpha^2)/4)
    else:
        phase = 2 * al * (b * c * be - d + 1) - c * be * (a * be - 2) - d * b * al * al
    return new, sign, phase


def transform_theta_ab(m: ModMap, ch, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """Return (value, new_char): theta[new_char](x/(c tau+d) | m(tau)) from theta[ch](x|tau)."""
    ch = ThetaChar(*ch)
    t, x, _, fac = _frame(m, x, tau)
    new, sign, phase = transport_char(m, ch)
    mult = multiplier_epsilon(m) * Multiplier8(phase)
    base = char_series(ch.alpha, ch.beta, x, t, ((0, 0),), budget)[0].value
    return sign * mult.value * fac * base, new


def theta_char_reduced(ch, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """theta[ch](x|tau) evaluated after moving tau into the fundamental domain.

    With g(tau) = tau* the inverse map h = g^{-1} sends tau* back to tau, so
    the law for h expresses theta[ch] at tau through a transported
    characteristic at tau*, where the series converges fast. The argument is
    then shifted into the fundamental cell.
    """
    ch = ThetaChar(*ch)
    t = as_tau(tau)
    x = mpc(x)
    red, g = fundamental_domain_reduce(t)
    h = g.inverse()
    a, b, c, d = h.as_tuple()
    w = h.cocycle(red)  # c tau* + d
    # source characteristic from the inverse formulas; the law is applied to its
    # {0,1} representative, which transports back to the class of ch
    at, bt = ch.alpha + 1, ch.beta + 1
    src, _ = ThetaChar(a * at + c * bt - 1, b * at + d * bt - 1).reduced()
    new, sign, phase = transport_char(h, src)
    target, sign_target = ch.reduced()
    if new != target:
        raise AssertionError("characteristic transport left the class")
    mult = multiplier_epsilon(h) * Multiplier8(phase)
    xs = x * w
    xr, pref, _ = reduce_x(src, xs, red)
    base = pref * char_series(src.alpha, src.beta, xr, red, ((0, 0),), budget)[0].value
    val = sign * mult.value * ctx.sqrt(w) * ctx.exp(pi * I * c * xs ** 2 / w) * base
    return sign_target * val


def theta_reduced(k: int, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    ch, s = char_of(k)
    return s * theta_char_reduced(ch, x, tau, budget)


# multiplication formulas


def _index_of(k_or_char):
    if isinstance(k_or_char, int):
        char_of(k_or_char)
        return k_or_char, 1
    rep, sign = ThetaChar(*k_or_char).reduced()
    for k in (1, 2, 3, 4):
        ch, s = char_of(k)
        if ch == rep:
            return k, sign * s
    raise AssertionError("unreachable")


def multiply_argument(k_or_char, n: int, x, tau, budget: SeriesBudget = DEFAULT_BUDGET):
    """theta(n x) for integer n >= 1 through the closed multiplication recurrences."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("integer n only; see multiplication_identity_residual for complex n")
    if n < 1:
        raise ValueError("n must be >= 1")
    k, sign = _index_of(k_or_char)
    t = as_tau(tau)
    x = mpc(x)
    c2, c3, c4 = theta_constants(t, budget)
    cs = {2: c2, 3: c3, 4: c4}
    T = {j: [ctx.mpc(0) if j == 1 else cs[j], theta_q(j, x, t, budget)] for j in (1, 2, 3, 4)}

    def div(num, den):
        if abs(den) < 1e-25:
            raise ZeroDenominator("theta((n-2)x) vanishes; perturb x")
        return num / den

    for j in range(2, n + 1):
        p = [T[i][j - 1] for i in (1, 2, 3, 4)]
        one = [T[i][1] for i in (1, 2, 3, 4)]
        if j == 2:
            t1 = 2 * one[0] * one[1] * one[2] * one[3] / (c2 * c3 * c4)
        else:
            t1 = div(p[2] ** 2 * one[1] ** 2 - p[1] ** 2 * one[2] ** 2, c4 ** 2 * T[1][j - 2])
        t2 = div(p[2] ** 2 * one[2] ** 2 - p[3] ** 2 * one[3] ** 2, c2 ** 2 * T[2][j - 2])
        t3 = div(p[1] ** 2 * one[1] ** 2 + p[3] ** 2 * one[3] ** 2, c3 ** 2 * T[3][j - 2])
        t4 = div(p[2] ** 2 * one[2] ** 2 - p[1] ** 2 * one[1] ** 2, c4 ** 2 * T[4][j - 2])
        for i, v in zip((1, 2, 3, 4), (t1, t2, t3, t4)):
            T[i].append(v)
    return sign * T[k][n]


def multiplication_identity_residual(k_or_char, n, x, tau, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """|lhs - rhs| of the multiplication recurrence at arbitrary complex n, every factor by q-series."""
    k, _ = _index_of(k_or_char)
    t = as_tau(tau)
    x = mpc(x)
    n = mpc(n)
    c2, c3, c4 = theta_constants(t, budget)

    def th(j, z):
        return theta_q(j, z, t, budget)

    n1 = n - 1
    if k == 1:
        num = th(3, n1 * x) ** 2 * th(2, x) ** 2 - th(2, n1 * x) ** 2 * th(3, x) ** 2
        den = c4 ** 2 * th(1, (n - 2) * x)
    elif k == 2:
        num = th(3, n1 * x) ** 2 * th(3, x) ** 2 - th(4, n1 * x) ** 2 * th(4, x) ** 2
        den = c2 ** 2 * th(2, (n - 2) * x)
    elif k == 3:
        num = th(2, n1 * x) ** 2 * th(2, x) ** 2 + th(4, n1 * x) ** 2 * th(4, x) ** 2
        den = c3 ** 2 * th(3, (n - 2) * x)
    else:
        num = th(3, n1 * x) ** 2 * th(3, x) ** 2 - th(2, n1 * x) ** 2 * th(2, x) ** 2
        den = c4 ** 2 * th(4, (n - 2) * x)
    if abs(den) < 1e-25:
        raise ZeroDenominator("theta((n-2)x) vanishes; perturb x")
    return float(abs(th(k, n * x) - num / den))


def char_multiplication_residual(alpha: int, beta: int, n, x, tau, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """The characteristic form of the recurrence for the even theta[alpha+1, beta+1]."""
    if alpha % 2 == 0 and beta % 2 == 0:
        raise ValueError("theta[1,1] is odd and its constant vanishes; use the theta_1 form")
    t = as_tau(tau)
    x = mpc(x)
    n = mpc(n)
    br_a = -1 if alpha % 2 else 1
    br_b = -1 if beta % 2 else 1

    def th(p, q, z):
        return char_series(p, q, z, t, ((0, 0),), budget)[0].value

    n1 = n - 1
    num = (br_b * th(alpha, 0, n1 * x) ** 2 * th(alpha, 0, x) ** 2
           + br_a * th(0, beta, n1 * x) ** 2 * th(0, beta, x) ** 2)
    den = th(alpha + 1, beta + 1, 0) ** 2 * th(alpha + 1, beta + 1, (n - 2) * x)
    if abs(den) < 1e-25:
        raise ZeroDenominator("theta((n-2)x) vanishes; perturb x")
    return float(abs(th(alpha + 1, beta + 1, n * x) + num / den))
