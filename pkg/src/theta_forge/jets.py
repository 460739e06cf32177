"""Truncated Taylor series ("jets") for exact derivative propagation.

A jet stores c_0..c_N with f(t0 + h) = sum c_k h^k + O(h^{N+1}); the k-th
derivative at t0 is k! c_k. Jets turn closed polynomial ODE systems into
exact higher derivatives without any finite differencing.
"""

from __future__ import annotations

from ._mp import ctx


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [ctx.mpc(v) for v in coeffs]

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @classmethod
    def const(cls, value, order: int) -> "Jet":
        return cls([value] + [0] * order)

    @classmethod
    def variable(cls, value, order: int) -> "Jet":
        return cls([value, 1] + [0] * (order - 1)) if order >= 1 else cls([value])

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.const(other, self.order)

    def __add__(self, other):
        o = self._lift(other)
        n = min(self.order, o.order)
        return Jet([self.c[k] + o.c[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-v for v in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([v * other for v in self.c])
        n = min(self.order, other.order)
        a, b = self.c, other.c
        return Jet([ctx.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)])

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("jet with zero constant term")
        out = [1 / a[0]]
        for k in range(1, len(a)):
            s = ctx.fsum(a[i] * out[k - i] for i in range(1, k + 1))
            out.append(-s / a[0])
        return Jet(out)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([v / other for v in self.c])
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = Jet.const(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def deriv(self) -> "Jet":
        return Jet([k * self.c[k] for k in range(1, len(self.c))] or [0])

    def integral(self, c0=0) -> "Jet":
        return Jet([c0] + [self.c[k] / (k + 1) for k in range(len(self.c))])

    def log(self) -> "Jet":
        """Jet of log(f) with the principal log at the base point."""
        d = self.deriv() / self.truncate(self.order - 1)
        return d.integral(ctx.log(self.c[0]))

    def exp(self) -> "Jet":
        a = self.c
        out = [ctx.exp(a[0])]
        for k in range(1, len(a)):
            out.append(ctx.fsum(j * a[j] * out[k - j] for j in range(1, k + 1)) / k)
        return Jet(out)

    def sqrt(self) -> "Jet":
        a = self.c
        s0 = ctx.sqrt(a[0])
        out = [s0]
        for k in range(1, len(a)):
            s = ctx.fsum(out[i] * out[k - i] for i in range(1, k))
            out.append((a[k] - s) / (2 * s0))
        return Jet(out)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.c[: order + 1])

    def compose(self, inner: "Jet") -> "Jet":
        """self(inner(t)) where self is expanded about inner.c[0]."""
        n = min(self.order, inner.order)
        shift = inner - inner.c[0]
        shift = shift.truncate(n)
        out = Jet.const(self.c[n], n)
        for k in range(n - 1, -1, -1):
            out = out * shift + self.c[k]
        return out

    def derivative(self, k: int):
        """k-th derivative value at the base point."""
        return self.c[k] * ctx.factorial(k)

    def derivatives(self):
        return [self.derivative(k) for k in range(len(self.c))]


def taylor_solve(rhs, y0, order: int) -> list[Jet]:
    """Jets of the solution of y' = rhs(y) through y0, to the given order.

    ``rhs`` maps a list of jets to a list of jets using only ring operations,
    so coefficient k of rhs(y) depends only on coefficients <= k of y.
    """
    ys = [Jet([v]) for v in y0]
    for k in range(order):
        f = rhs(ys)
        ys = [Jet(y.c + [fj.c[k] / (k + 1)]) for y, fj in zip(ys, f)]
    return ys
