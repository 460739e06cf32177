"""Integer recurrences and the power-series pipelines built on them.

Grids are filled over exact rationals (``fractions.Fraction``) and every cell
is checked to be an integer before it is stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ._mp import ctx, mpc, pi, I
from .errors import IntegralityViolation, TruncationTooCoarse
from .polys import Poly
from .theta import ThetaChar, as_tau


def _bracket(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class IntGrid:
    """Rectangular table of exact integers indexed by (m, n)."""

    name: str
    extent: tuple[int, int]
    data: dict = field(repr=False)
    params: tuple = ()

    def __getitem__(self, key) -> int:
        m, n = key
        if m < 0 or n < 0:
            return 0
        if m > self.extent[0] or n > self.extent[1]:
            raise IndexError(f"{self.name}[{m},{n}] outside extent {self.extent}")
        return self.data[(m, n)]

    def rows(self) -> list[list[int]]:
        return [[self.data[(m, n)] for n in range(self.extent[1] + 1)]
                for m in range(self.extent[0] + 1)]

    def to_json(self) -> dict:
        return {"grid_name": self.name, "extents": list(self.extent),
                "rows": [[str(v) for v in row] for row in self.rows()]}


def _as_int(name: str, m: int, n: int, value: Fraction) -> int:
    if value.denominator != 1:
        raise IntegralityViolation(f"{name}[{m},{n}] = {value} is not an integer")
    return value.numerator


def _fill(name, cells, rule):
    table: dict = {}

    def get(m, n):
        if m < 0 or n < 0:
            return Fraction(0)
        return table.get((m, n), Fraction(0))

    for m, n in cells:
        if m == 0 and n == 0:
            table[(0, 0)] = Fraction(1)
            continue
        val = rule(m, n, get)
        _as_int(name, m, n, val)
        table[(m, n)] = val
    return {k: int(v) for k, v in table.items()}


def _check_extent(m_max: int, n_max: int):
    if m_max < 0 or n_max < 0:
        raise ValueError("extents must be non-negative")


def grid_A(m_max: int, n_max: int) -> IntGrid:
    """Weierstrass' integers A_{m,n} (filled by ascending weight 2m + 3n)."""
    _check_extent(m_max, n_max)
    w_max = 2 * m_max + 3 * n_max
    cells = sorted(((m, n) for m in range(w_max // 2 + 2) for n in range(w_max // 3 + 2)
                    if 2 * m + 3 * n <= w_max), key=lambda c: (2 * c[0] + 3 * c[1], c[0]))

    def rule(m, n, A):
        return (Fraction(16, 3) * (n + 1) * A(m - 2, n + 1) + 3 * (m + 1) * A(m + 1, n - 1)
                - Fraction(1, 3) * (2 * m + 3 * n - 1) * (4 * m + 6 * n - 1) * A(m - 1, n))

    full = _fill("A", cells, rule)
    data = {(m, n): full.get((m, n), 0) for m in range(m_max + 1) for n in range(n_max + 1)}
    return IntGrid("A", (m_max, n_max), data)


def _b_cells(m_max: int, n_max: int):
    w_max = m_max + 2 * n_max
    return sorted(((m, n) for m in range(w_max + 1) for n in range(w_max // 2 + 1)
                   if m + 2 * n <= w_max), key=lambda c: (c[0] + 2 * c[1], c[0]))


def grid_B_eps(epsilon: int, m_max: int, n_max: int) -> IntGrid:
    """Coefficients of the universal series; epsilon = 1 gives sigma_lambda, 0 gives sigma."""
    if epsilon not in (0, 1):
        raise ValueError("epsilon must be 0 or 1")
    _check_extent(m_max, n_max)
    eps = epsilon

    def rule(m, n, B):
        return (24 * (n + 1) * B(m - 3, n + 1) + (4 * m - 12 * n - 4 - eps) * B(m - 1, n)
                - Fraction(4, 3) * (m + 1) * B(m + 1, n - 1)
                - Fraction(1, 3) * (m + 2 * n - 1) * (2 * m + 4 * n - 1 - 2 * eps) * B(m, n - 1))

    name = f"B_eps{eps}"
    full = _fill(name, _b_cells(m_max, n_max), rule)
    data = {(m, n): full.get((m, n), 0) for m in range(m_max + 1) for n in range(n_max + 1)}
    return IntGrid(name, (m_max, n_max), data, (eps,))


def grid_B_sigma(m_max: int, n_max: int) -> IntGrid:
    """Coefficients of the sigma_lambda series, from their own displayed recurrence."""
    _check_extent(m_max, n_max)

    def rule(m, n, B):
        return (24 * (n + 1) * B(m - 3, n + 1) + (4 * m - 12 * n - 5) * B(m - 1, n)
                - Fraction(4, 3) * (m + 1) * B(m + 1, n - 1)
                - Fraction(1, 3) * (m + 2 * n - 1) * (2 * m + 4 * n - 3) * B(m, n - 1))

    full = _fill("B_sigma", _b_cells(m_max, n_max), rule)
    data = {(m, n): full.get((m, n), 0) for m in range(m_max + 1) for n in range(n_max + 1)}
    return IntGrid("B_sigma", (m_max, n_max), data)


def _rect_cells(m_max, n_max):
    return sorted(((m, n) for m in range(m_max + 1) for n in range(n_max + 1)),
                  key=lambda c: (c[0] + c[1], c[0]))


def grid_G_theta1(m_max: int, n_max: int) -> IntGrid:
    _check_extent(m_max, n_max)

    def rule(m, n, G):
        return (4 * (n - 2 * m - 1) * G(m, n - 1) - 4 * (m - 2 * n - 1) * G(m - 1, n)
                - 2 * (m + n - 1) * (2 * m + 2 * n - 1)
                * (G(m - 2, n) + G(m - 1, n - 1) + G(m, n - 2)))

    return IntGrid("G_theta1", (m_max, n_max), _fill("G_theta1", _rect_cells(m_max, n_max), rule))


def grid_G_ab(alpha: int, m_max: int, n_max: int, beta: int = 0) -> IntGrid:
    """Coefficients of the even-characteristic theta series.

    Only beta = 0 is needed in practice; other characteristics follow from
    the permutation laws (``G_ab_permuted``). A nonzero beta runs the
    recurrence directly, which the tests use to confirm those laws.
    """
    _check_extent(m_max, n_max)
    ba, bb, bab = _bracket(alpha), _bracket(beta), _bracket(alpha + beta)

    def rule(m, n, G):
        return (ba * (4 * n - 8 * m - 3) * G(m, n - 1) - bb * (4 * m - 8 * n - 3) * G(m - 1, n)
                - 2 * (m + n - 1) * (2 * m + 2 * n - 3)
                * (G(m - 2, n) + bab * G(m - 1, n - 1) + G(m, n - 2)))

    name = f"G_ab{alpha % 2}{beta % 2}"
    return IntGrid(name, (m_max, n_max), _fill(name, _rect_cells(m_max, n_max), rule),
                   (alpha % 2, beta % 2))


def G_ab_permuted(alpha: int, beta: int, m_max: int, n_max: int) -> IntGrid:
    """G^{(alpha,beta)} derived from a stored beta = 0 grid by the permutation laws."""
    alpha, beta = alpha % 2, beta % 2
    if beta == 0:
        return grid_G_ab(alpha, m_max, n_max)
    # G^{(0,1)}_{m,n} = (-1)^{m+n} G^{(1,0)}_{m,n};  G^{(1,1)}_{m,n} = G^{(1,1)}_{m,n} is
    # not covered by the swap law with a beta = 0 partner, so it is computed directly.
    if alpha == 0:
        base = grid_G_ab(1, m_max, n_max)
        data = {(m, n): (-1) ** (m + n) * v for (m, n), v in base.data.items()}
        return IntGrid("G_ab01", (m_max, n_max), data, (0, 1))
    return grid_G_ab(1, m_max, n_max, beta=1)


# exact C_k polynomials in (g2, g3)


def _halphen_g2g3(p: Poly) -> Poly:
    g2 = Poly.var(2, 0)
    g3 = Poly.var(2, 1)
    return p.diff(0) * (12 * g3) + p.diff(1) * (g2 * g2 * Fraction(2, 3))


def halphen_Ck_polys(k_max: int) -> list[Poly]:
    """C_0..C_{k_max} as exact polynomials in (g2, g3)."""
    g2 = Poly.var(2, 0)
    out = [Poly.const(2, Fraction(1))]
    if k_max >= 1:
        out.append(_halphen_g2g3(out[0]))
    for k in range(2, k_max + 1):
        out.append(_halphen_g2g3(out[k - 1])
                   - g2 * out[k - 2] * Fraction((k - 1) * (2 * k - 1), 6))
    return out


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_j coeffs[j] * x^(offset + step*j), with a heuristic tail bound."""

    coeffs: tuple
    step: int
    offset: int
    order: int
    tail_bound: float = float("nan")

    def __call__(self, x):
        x = mpc(x)
        return ctx.fsum(c * x ** (self.offset + self.step * j) for j, c in enumerate(self.coeffs))

    def coefficient(self, power: int):
        j, r = divmod(power - self.offset, self.step)
        if r or j < 0 or j >= len(self.coeffs):
            return 0
        return self.coeffs[j]

    def last_term(self, x):
        """Larger of the last two terms; one of them can vanish identically (g3 = 0, say)."""
        x = mpc(x)
        n = len(self.coeffs)
        return max((abs(self.coeffs[j] * x ** (self.offset + self.step * j)) for j in range(max(0, n - 2), n)),
                   default=ctx.mpf(0))


def halphen_Ck(k_max: int, g2, g3) -> TruncatedSeries:
    """sigma(x; g2, g3) = sum_k C_k x^(2k+1)/(2k+1)! with C_k from the Halphen recurrence."""
    g2, g3 = mpc(g2), mpc(g3)
    polys = halphen_Ck_polys(k_max)
    coeffs = tuple(p(g2, g3) / ctx.factorial(2 * k + 1) for k, p in enumerate(polys))
    return TruncatedSeries(coeffs, 2, 1, k_max)


def _sigma_coeffs_A(g2, g3, order):
    W = order
    A = grid_A(W // 2 + 1, W // 3 + 1)
    out = []
    for k in range(order + 1):
        s = ctx.mpc(0)
        for n in range(k // 3 + 1):
            rem = k - 3 * n
            if rem % 2:
                continue
            m = rem // 2
            s += A[m, n] * (g2 / 2) ** m * (2 * g3) ** n
        out.append(s / ctx.factorial(2 * k + 1))
    return tuple(out)


def _sigma_coeffs_wei(g2, g3, order):
    A = grid_A(order // 2 + 1, order // 3 + 1)
    out = []
    for k in range(order + 1):
        s = ctx.mpc(0)
        for nu in range(-(-k // 3), k // 2 + 1):
            s += (ctx.mpf(2) ** (2 * k - 5 * nu) * A[3 * nu - k, k - 2 * nu]
                  * g2 ** (3 * nu - k) * g3 ** (k - 2 * nu))
        out.append(s / ctx.factorial(2 * k + 1))
    return tuple(out)


SIGMA_PIPELINES = ("A_grid", "C_k", "grouped_wei")


def sigma_truncated(g2, g3, order: int = 20, pipeline: str = "A_grid") -> TruncatedSeries:
    g2, g3 = mpc(g2), mpc(g3)
    if pipeline == "A_grid":
        coeffs = _sigma_coeffs_A(g2, g3, order)
    elif pipeline == "grouped_wei":
        coeffs = _sigma_coeffs_wei(g2, g3, order)
    elif pipeline == "C_k":
        coeffs = halphen_Ck(order, g2, g3).coeffs
    else:
        raise ValueError(f"unknown sigma pipeline {pipeline!r}")
    return TruncatedSeries(coeffs, 2, 1, order)


def _estimate(ts: TruncatedSeries, x, tol):
    est = 10 * float(abs(ts.last_term(x)))
    if tol is not None and est > tol:
        raise TruncationTooCoarse(f"truncation estimate {est:.3g} exceeds {tol:.3g}; raise the order")
    return est


def sigma_series(x, g2, g3, order: int = 20, pipeline: str = "A_grid", tol=None):
    """sigma(x; g2, g3) from a truncated power series (x^(2k+1) for k <= order)."""
    ts = sigma_truncated(g2, g3, order, pipeline)
    _estimate(ts, x, tol)
    return ts(x)


def xi_truncated(e, g2, epsilon: int, order: int = 20) -> TruncatedSeries:
    """Universal series: epsilon = 1 gives sigma_lambda(e_lambda), epsilon = 0 gives sigma."""
    e, g2 = mpc(e), mpc(g2)
    B = grid_B_eps(epsilon, order, order // 2)
    coeffs = []
    for k in range(order + 1):
        s = ctx.fsum(ctx.mpf(2) ** (-nu) * B[k - 2 * nu, nu] * e ** (k - 2 * nu) * g2 ** nu
                     for nu in range(k // 2 + 1))
        coeffs.append(s / ctx.factorial(2 * k + 1 - epsilon))
    return TruncatedSeries(tuple(coeffs), 2, 1 - epsilon, order)


def xi_series(x, e, g2, epsilon: int, order: int = 20, tol=None):
    ts = xi_truncated(e, g2, epsilon, order)
    _estimate(ts, x, tol)
    return ts(x)


def sigma_lambda_series(x, e_lambda, g2, order: int = 20, tol=None):
    return xi_series(x, e_lambda, g2, 1, order, tol)


# theta power series


def _N_theta1(nu, G, th2, th3, th4, variant):
    if variant == 0:
        return ctx.fsum(G[nu - s, s] * th4 ** (4 * s) * th2 ** (4 * (nu - s)) for s in range(nu + 1))
    if variant == 1:
        return ctx.fsum((-1) ** s * G[nu - s, s] * th3 ** (4 * s) * th4 ** (4 * (nu - s))
                        for s in range(nu + 1))
    if variant == 2:
        return ctx.fsum((-1) ** s * G[s, nu - s] * th3 ** (4 * s) * th2 ** (4 * (nu - s))
                        for s in range(nu + 1))
    raise ValueError("variant must be 0, 1 or 2")


def theta1_truncated(tau, order: int = 20, pipeline: str = "G_grid", variant: int = 0) -> TruncatedSeries:
    """theta_1(x|tau) = sum_k c_k x^(2k+1) for k <= order."""
    from .constants import eta_w, theta_constants

    t = as_tau(tau)
    if pipeline == "eta3_deriv":
        from .diffsys import constant_jets

        th2, th3, th4, _ = constant_jets(t, order)
        eta3 = th2 * th3 * th4 / 2
        coeffs = tuple(2 * pi * (4 * pi * I) ** k / ctx.factorial(2 * k + 1) * eta3.derivative(k)
                       for k in range(order + 1))
        return TruncatedSeries(coeffs, 2, 1, order)
    if pipeline != "G_grid":
        raise ValueError(f"unknown theta1 pipeline {pipeline!r}")
    th2, th3, th4 = theta_constants(t)
    eta = eta_w(t)
    eta3 = th2 * th3 * th4 / 2
    G = grid_G_theta1(order, order)
    Ns = [_N_theta1(nu, G, th2, th3, th4, variant) for nu in range(order + 1)]
    coeffs = []
    for k in range(order + 1):
        inner = ctx.fsum((-pi ** 2 / 6) ** nu * eta ** (k - nu) * Ns[nu]
                         / (ctx.factorial(k - nu) * ctx.factorial(2 * nu + 1)) for nu in range(k + 1))
        coeffs.append(2 * pi * eta3 * (-2) ** k * inner)
    return TruncatedSeries(tuple(coeffs), 2, 1, order)


def theta1_series(x, tau, order: int = 20, pipeline: str = "G_grid", variant: int = 0, tol=None):
    ts = theta1_truncated(tau, order, pipeline, variant)
    _estimate(ts, x, tol)
    return ts(x)


def _ab_bases(alpha, beta, th2, th3, th4):
    """(vartheta[alpha-1, 0], vartheta[0, beta-1]) up to signs irrelevant in fourth powers."""
    first = th2 if (alpha - 1) % 2 else th3
    second = th4 if (beta - 1) % 2 else th3
    return first, second


def theta_ab_truncated(ch, tau, order: int = 20, pipeline: str = "G_grid") -> TruncatedSeries:
    """Even-characteristic theta[alpha, beta](x|tau) = sum_k c_k x^(2k)."""
    from .constants import eta_w, theta_constants

    rep, sign = ThetaChar(*ch).reduced()
    if rep.parity == 0:
        raise ValueError("odd characteristic: use theta1_series")
    a, b = rep.alpha, rep.beta
    t = as_tau(tau)
    idx = {(1, 0): 0, (0, 0): 1, (0, 1): 2}[(a, b)]
    if pipeline == "eta3_deriv":
        from .diffsys import constant_jets

        jet = constant_jets(t, order)[idx]
        coeffs = tuple(sign * (4 * pi * I) ** k / ctx.factorial(2 * k) * jet.derivative(k)
                       for k in range(order + 1))
        return TruncatedSeries(coeffs, 2, 0, order)
    if pipeline != "G_grid":
        raise ValueError(f"unknown theta pipeline {pipeline!r}")
    ths = theta_constants(t)
    eta = eta_w(t)
    u, v = _ab_bases(a, b, *ths)
    G = G_ab_permuted(a, b, order, order)
    Ns = [ctx.fsum(G[s, nu - s] * u ** (4 * s) * v ** (4 * (nu - s)) for s in range(nu + 1))
          for nu in range(order + 1)]
    coeffs = []
    for k in range(order + 1):
        inner = ctx.fsum((-pi ** 2 / 6) ** nu * eta ** (k - nu) * Ns[nu]
                         / (ctx.factorial(k - nu) * ctx.factorial(2 * nu)) for nu in range(k + 1))
        coeffs.append(sign * ths[idx] * (-2) ** k * inner)
    return TruncatedSeries(tuple(coeffs), 2, 0, order)


def theta_ab_series(ch, x, tau, order: int = 20, pipeline: str = "G_grid", tol=None):
    ts = theta_ab_truncated(ch, tau, order, pipeline)
    _estimate(ts, x, tol)
    return ts(x)


def theta_k_series(k: int, x, tau, order: int = 20, pipeline: str = "G_grid", tol=None):
    """Recurrence-series value of theta_k, k = 1..4."""
    if k == 1:
        return theta1_series(x, tau, order, pipeline, tol=tol)
    ch = {2: (1, 0), 3: (0, 0), 4: (0, 1)}[k]
    return theta_ab_series(ch, x, tau, order, pipeline, tol=tol)


# Halphen operator in its three representations


def halphen_operator_apply(poly: Poly, rep: str = "g2g3", tau=None, alpha: int = 1, beta: int = 1):
    """Apply the Halphen operator.

    rep = "g2g3":  poly in (g2, g3), operator 12 g3 d/dg2 + (2/3) g2^2 d/dg3 (exact).
    rep = "e_g2":  poly in (e, g2), operator (4e^2 - g2*2/3) d/de + 12(4e^3 - g2 e) d/dg2.
    rep = "theta_ab": poly in (g2, g3) rewritten through the (alpha, beta) theta
        representation and acted on in the variables U = vartheta_{alpha0}^4,
        V = vartheta_{0beta}^4; returns the numerical value at tau.
    """
    if rep == "g2g3":
        return _halphen_g2g3(poly)
    if rep == "e_g2":
        e = Poly.var(2, 0)
        g2 = Poly.var(2, 1)
        return (poly.diff(0) * (4 * e * e - g2 * Fraction(2, 3))
                + poly.diff(1) * (12 * (4 * e ** 3 - g2 * e)))
    if rep == "theta_ab":
        if tau is None:
            raise ValueError("theta_ab representation needs tau")
        from .constants import theta_constants

        ba, bb, bab = _bracket(alpha), _bracket(beta), _bracket(alpha + beta)
        U = Poly.var(2, 0)
        V = Poly.var(2, 1)
        g2 = (U * U + U * V * bab + V * V) * (pi ** 4 / 12)
        g3 = (U ** 3 * (2 * bb) - U * V * V * (3 * bb) + U * U * V * (3 * ba) - V ** 3 * (2 * ba)) * (pi ** 6 / 432)
        p_uv = poly.compose([g2, g3])
        op = (p_uv.diff(0) * ((U * U * bb + U * V * (2 * ba)) * (pi ** 2 / 3))
              - p_uv.diff(1) * ((V * V * ba + U * V * (2 * bb)) * (pi ** 2 / 3)))
        th2, th3, th4 = theta_constants(tau)
        u = (th2 if alpha % 2 else th3) ** 4
        v = (th4 if beta % 2 else th3) ** 4
        return op(u, v)
    raise ValueError(f"unknown representation {rep!r}")
