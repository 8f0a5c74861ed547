"""Prime fields and their quadratic extensions F_p[s]/(s^2 - eps)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import is_prime, smallest_nonresidue


@lru_cache(maxsize=None)
def _nonresidue(p: int) -> int:
    return smallest_nonresidue(p)


@dataclass(frozen=True)
class FqElement:
    """a + b*s in F_p (f = 1, b = 0) or F_{p^2} (f = 2, s^2 = eps)."""

    p: int
    f: int
    a: int
    b: int = 0

    def __post_init__(self):
        if self.f not in (1, 2):
            raise ValueError("only extension degrees 1 and 2 are supported")
        if self.f == 1 and self.b % self.p:
            raise ValueError("prime-field element with a nonzero s-coordinate")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)

    @classmethod
    def make(cls, p: int, f: int, a: int, b: int = 0) -> "FqElement":
        if not is_prime(p) or p == 2:
            raise ValueError("odd prime characteristic required")
        return cls(p, f, a, b)

    @property
    def eps(self) -> int:
        return _nonresidue(self.p)

    def _co(self, other) -> "FqElement":
        if isinstance(other, FqElement):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            if other.f != self.f:
                f = max(self.f, other.f)
                return FqElement(self.p, f, other.a, other.b)
            return other
        return FqElement(self.p, self.f, int(other))

    def _lift(self, f):
        return self if self.f == f else FqElement(self.p, f, self.a, self.b)

    def __add__(self, other):
        o = self._co(other)
        s = self._lift(o.f)
        return FqElement(self.p, o.f, s.a + o.a, s.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.p, self.f, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        o = self._co(other)
        s = self._lift(o.f)
        p = self.p
        if o.f == 1:
            return FqElement(p, 1, s.a * o.a)
        e = self.eps
        return FqElement(p, 2, s.a * o.a + e * s.b * o.b, s.a * o.b + s.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - self.eps * self.b * self.b) % self.p

    def inverse(self) -> "FqElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.f == 1:
            return FqElement(self.p, 1, pow(self.a, -1, self.p))
        n_inv = pow(self.norm(), -1, self.p)
        return FqElement(self.p, 2, self.a * n_inv, -self.b * n_inv)

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FqElement(self.p, self.f, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        q = self.p**self.f
        return (self ** ((q - 1) // 2)) == FqElement(self.p, self.f, 1)

    def frobenius(self) -> "FqElement":
        # s^p = eps^((p-1)/2) s = -s
        return FqElement(self.p, self.f, self.a, -self.b)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and (self.a - other) % self.p == 0
        if not isinstance(other, FqElement):
            return NotImplemented
        return self.p == other.p and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.p, self.a, self.b))

    def __repr__(self):
        if self.f == 1:
            return f"{self.a} (mod {self.p})"
        return f"{self.a}+{self.b}s (mod {self.p}, s^2={self.eps})"
