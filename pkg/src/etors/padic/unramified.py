"""Truncated arithmetic in the ring of integers of Q_{p^f}, modulo p^k.

Elements are coordinate vectors on 1, rho, ..., rho^(f-1) where rho is a root
of a fixed monic g of degree f that stays irreducible mod p.  That basis is
integral, so the valuation of an element is the least valuation of its
coordinates.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from ..exact import zpoly as Z
from ..exact.arith import is_prime
from ..exact.factor import is_irreducible_mod_p

DEFAULT_PRECISION = 20


class BelowPrecision(ArithmeticError):
    """The quantity vanishes modulo p^k, so its valuation is only known to be >= k."""


class HenselFailure(ArithmeticError):
    pass


@lru_cache(maxsize=64)
def defining_polynomial(p: int, f: int) -> tuple[int, ...]:
    """Smallest monic x^f + c_{f-1} x^{f-1} + ... + c_0 (lexicographic in c_{f-1}, ..., c_0) irreducible mod p."""
    if f == 1:
        return (0, 1)
    for top_down in itertools.product(range(p), repeat=f):
        coeffs = list(reversed(top_down)) + [1]
        if is_irreducible_mod_p(coeffs, p):
            return tuple(coeffs)
    raise ArithmeticError("no irreducible polynomial found")  # pragma: no cover


class UnramifiedRing:
    """Z_{p^f} / p^k."""

    _cache: dict = {}

    def __new__(cls, p: int, f: int, k: int = DEFAULT_PRECISION):
        key = (p, f, k)
        if key not in cls._cache:
            if not is_prime(p) or f < 1 or k < 1:
                raise ValueError("need a prime p, f >= 1 and k >= 1")
            obj = super().__new__(cls)
            obj.p, obj.f, obj.k = p, f, k
            obj.modulus = p**k
            obj.g = list(defining_polynomial(p, f))
            obj._frob_images = None
            cls._cache[key] = obj
        return cls._cache[key]

    # construction ---------------------------------------------------------
    def __call__(self, coords) -> "UnramifiedElement":
        if isinstance(coords, UnramifiedElement):
            return coords
        if isinstance(coords, int):
            coords = [coords]
        c = [int(x) % self.modulus for x in coords]
        if len(c) > self.f:
            c = Z.rem_mod(c, self.g, self.modulus)
        return UnramifiedElement(self, tuple(c + [0] * (self.f - len(c))))

    def zero(self) -> "UnramifiedElement":
        return self(0)

    def one(self) -> "UnramifiedElement":
        return self(1)

    def gen(self) -> "UnramifiedElement":
        return self([0, 1]) if self.f > 1 else self(0)

    def random(self, rng: random.Random, valuation: int = 0) -> "UnramifiedElement":
        """Seeded element p^valuation * u with u a unit."""
        while True:
            c = [rng.randrange(self.modulus) for _ in range(self.f)]
            if any(x % self.p for x in c):
                break
        return self(c) * (self.p**valuation)

    def residues(self):
        """All p^f residue classes, as elements."""
        for c in itertools.product(range(self.p), repeat=self.f):
            yield self(list(c))

    # Frobenius ------------------------------------------------------------
    def frobenius_of_gen(self) -> "UnramifiedElement":
        """The root of g congruent to rho^p mod p, by Newton iteration."""
        rho = self.gen()
        r = rho ** self.p
        gp = Z.derivative(self.g)
        for _ in range(self.k.bit_length() + 2):
            val = _eval(self.g, r)
            if val.is_zero():
                break
            d = _eval(gp, r)
            r = r - val * d.inverse()
        if not _eval(self.g, r).is_zero():
            raise HenselFailure("Newton iteration did not converge")
        return r

    def frob_images(self) -> list[tuple[int, ...]]:
        if self._frob_images is None:
            phi = self.frobenius_of_gen()
            imgs, cur = [], self.one()
            for _ in range(self.f):
                imgs.append(cur.coords)
                cur = cur * phi
            self._frob_images = imgs
        return self._frob_images

    def __repr__(self) -> str:
        return f"UnramifiedRing(p={self.p}, f={self.f}, k={self.k})"


def _eval(poly: list[int], x: "UnramifiedElement") -> "UnramifiedElement":
    acc = x.ring.zero()
    for c in reversed(poly):
        acc = acc * x + c
    return acc


@dataclass(frozen=True, eq=False)
class UnramifiedElement:
    ring: UnramifiedRing
    coords: tuple[int, ...]

    # arithmetic -------------------------------------------------------------
    def _lift(self, o) -> "UnramifiedElement":
        return o if isinstance(o, UnramifiedElement) else self.ring(o)

    def __add__(self, o):
        o = self._lift(o)
        m = self.ring.modulus
        return UnramifiedElement(self.ring, tuple((a + b) % m for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.modulus
        return UnramifiedElement(self.ring, tuple(-a % m for a in self.coords))

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        R = self.ring
        if isinstance(o, int):
            return UnramifiedElement(R, tuple(a * o % R.modulus for a in self.coords))
        o = self._lift(o)
        if R.f == 1:
            return UnramifiedElement(R, (self.coords[0] * o.coords[0] % R.modulus,))
        prod = Z._schoolbook(list(self.coords), list(o.coords))
        return R(prod)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.ring.one(), self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self) -> "UnramifiedElement":
        """Inverse of a unit: invert mod p in the residue field, then Newton x <- x (2 - a x)."""
        R = self.ring
        if self.valuation_or_none() != 0:
            raise ZeroDivisionError("only units are invertible in the integral ring")
        # residue field inverse via a^(p^f - 2)
        small = UnramifiedRing(R.p, R.f, 1)
        x0 = UnramifiedElement(small, tuple(c % R.p for c in self.coords)) ** (R.p**R.f - 2)
        x = R(list(x0.coords))
        prec = 1
        while prec < R.k:
            x = x * (2 - self * x)
            prec *= 2
        return x

    def __eq__(self, o) -> bool:
        if isinstance(o, int):
            o = self.ring(o)
        return isinstance(o, UnramifiedElement) and o.ring is self.ring and o.coords == self.coords

    def __hash__(self) -> int:
        return hash((self.ring.p, self.ring.f, self.ring.k, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    # invariants -------------------------------------------------------------
    def valuation_or_none(self) -> int | None:
        p = self.ring.p
        best = None
        for c in self.coords:
            if c:
                v = 0
                while c % p == 0:
                    c //= p
                    v += 1
                best = v if best is None else min(best, v)
        return best

    def residue(self) -> tuple[int, ...]:
        return tuple(c % self.ring.p for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __repr__(self) -> str:
        return f"U{self.ring.p}^{self.ring.f}{list(self.coords)}"


def valuation(e: UnramifiedElement) -> int:
    v = e.valuation_or_none()
    if v is None:
        raise BelowPrecision(f"element vanishes modulo p^{e.ring.k}")
    return v


def frobenius(e: UnramifiedElement, times: int = 1) -> UnramifiedElement:
    """phi_p applied `times` times: coordinates are fixed, rho goes to its Frobenius image."""
    R = e.ring
    imgs = R.frob_images()
    m = R.modulus
    cur = e.coords
    for _ in range(times % R.f if R.f > 1 else 0):
        out = [0] * R.f
        for c, img in zip(cur, imgs):
            if c:
                for j in range(R.f):
                    out[j] += c * img[j]
        cur = tuple(x % m for x in out)
    return UnramifiedElement(R, tuple(cur))


def teichmuller(e: UnramifiedElement) -> UnramifiedElement:
    """The root of unity congruent to e mod p (iterate x -> x^(p^f); each pass gains a digit)."""
    R = e.ring
    x = e
    for _ in range(R.k + 1):
        nxt = x ** (R.p**R.f)
        if nxt == x:
            return x
        x = nxt
    return x


def sqrt_unit(a: UnramifiedElement) -> UnramifiedElement:
    """A square root of a unit that is a square mod p (p odd), by residue search then Newton."""
    R = a.ring
    if R.p == 2:
        raise ValueError("odd p only")
    target = a.residue()
    small = UnramifiedRing(R.p, R.f, 1)
    start = None
    for r in small.residues():
        if (r * r).coords == target and not r.is_zero():
            start = r
            break
    if start is None:
        raise ValueError("not a square in the residue field")
    x = R(list(start.coords))
    half = pow(2, -1, R.modulus)
    for _ in range(R.k.bit_length() + 2):
        x = (x + a * x.inverse()) * half
    if x * x != a:
        raise HenselFailure("square root did not converge")
    return x
