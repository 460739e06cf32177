"""Integer Moebius maps in PSL(2, Z)."""

from __future__ import annotations

from dataclasses import dataclass

from ._mp import mpc


@dataclass(frozen=True)
class ModMap:
    """tau -> (a*tau + b)/(c*tau + d) with ad - bc = 1.

    A matrix and its negative act identically, so the stored representative
    has c > 0, or c = 0 and d = 1.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = (int(v) for v in (self.a, self.b, self.c, self.d))
        if a * d - b * c != 1:
            raise ValueError(f"determinant of ({a},{b},{c},{d}) is {a * d - b * c}, expected 1")
        if c < 0 or (c == 0 and d < 0):
            a, b, c, d = -a, -b, -c, -d
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls) -> "ModMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def S(cls) -> "ModMap":
        return cls(0, -1, 1, 0)

    @classmethod
    def T(cls, n: int = 1) -> "ModMap":
        return cls(1, n, 0, 1)

    def __matmul__(self, other: "ModMap") -> "ModMap":
        """Matrix product: (self @ other)(tau) = self(other(tau))."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return ModMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "ModMap":
        return ModMap(self.d, -self.b, -self.c, self.a)

    def apply(self, tau):
        t = mpc(getattr(tau, "tau", tau))
        return (self.a * t + self.b) / (self.c * t + self.d)

    def cocycle(self, tau):
        """c*tau + d."""
        t = mpc(getattr(tau, "tau", tau))
        return self.c * t + self.d

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def is_gamma2(self) -> bool:
        """Congruent to the identity modulo 2."""
        return self.a % 2 == 1 and self.d % 2 == 1 and self.b % 2 == 0 and self.c % 2 == 0
