"""Minimal sparse multivariate polynomials with exact or mpmath coefficients."""

from __future__ import annotations

from fractions import Fraction

from ._mp import ctx


class Poly:
    """Polynomial as {exponent tuple: coefficient}; all terms share the number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        for e, c in (terms or {}).items():
            if c != 0:
                self.terms[tuple(e)] = c

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, c=1) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): c})

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self.terms == other.terms

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms!r})"

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.nvars, out)

    def __call__(self, *values):
        exact = all(isinstance(v, (int, Fraction)) for v in values)
        total = 0
        for e, c in self.terms.items():
            term = c if exact or not isinstance(c, (int, Fraction)) else ctx.mpf(c.numerator) / c.denominator
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def compose(self, subs: list["Poly"]) -> "Poly":
        """Substitute polynomials (in a common new variable set) for each variable."""
        nv = subs[0].nvars
        out = Poly(nv)
        for e, c in self.terms.items():
            term = Poly.const(nv, c)
            for s, k in zip(subs, e):
                if k:
                    term = term * s ** k
            out = out + term
        return out

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.terms.values())
