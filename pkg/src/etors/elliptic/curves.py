"""Short Weierstrass curves over Q and F_p: group law, reduction, point counts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..exact.arith import is_prime
from ..exact.finitefield import FqElement

COUNT_GUARD = 10**6


class BadReduction(ValueError):
    def __init__(self, p: int):
        super().__init__(f"bad reduction at p = {p}")
        self.p = p


class PrimeTooSmall(ValueError):
    pass


class PrimeTooLarge(ValueError):
    pass


class HasseViolation(ArithmeticError):
    pass


@dataclass(frozen=True)
class Point:
    """Affine point (x, y) or the point at infinity (x = y = None)."""

    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "Point(O)"
        return f"Point({self.x}, {self.y})"


INFINITY = Point()
PointQ = Point
PointFp = Point


def _group_add(a, P: Point, Q: Point, one) -> Point:
    """Affine group law for y^2 = x^3 + a x + b, generic over the coordinate ring."""
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 == -y2:
            return INFINITY
        lam = (3 * x1 * x1 + a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return Point(x3, y3)


def _group_mul(add, neg, P: Point, n: int) -> Point:
    if n < 0:
        return _group_mul(add, neg, neg(P), -n)
    out = INFINITY
    base = P
    while n:
        if n & 1:
            out = add(out, base)
        n >>= 1
        if n:
            base = add(base, base)
    return out


class CurveQ:
    """y^2 = x^3 + a x + b over Q."""

    def __init__(self, a, b):
        self.a = Fraction(a)
        self.b = Fraction(b)
        if self.disc == 0:
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0")

    @property
    def disc(self) -> Fraction:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def j(self) -> Fraction:
        return -1728 * (4 * self.a) ** 3 / self.disc

    @property
    def c4(self) -> Fraction:
        return -48 * self.a

    @property
    def c6(self) -> Fraction:
        return -864 * self.b

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def contains(self, P: Point) -> bool:
        return P.is_infinity or P.y * P.y == self.rhs(P.x)

    def point(self, x, y) -> Point:
        P = Point(Fraction(x), Fraction(y))
        if not self.contains(P):
            raise ValueError(f"({x}, {y}) is not on {self}")
        return P

    def add(self, P: Point, Q: Point) -> Point:
        return _group_add(self.a, P, Q, Fraction(1))

    def neg(self, P: Point) -> Point:
        return P if P.is_infinity else Point(P.x, -P.y)

    def sub(self, P: Point, Q: Point) -> Point:
        return self.add(P, self.neg(Q))

    def mul(self, P: Point, n: int) -> Point:
        return _group_mul(self.add, self.neg, P, n)

    def two_torsion_x(self) -> list[Fraction]:
        """Rational roots of x^3 + a x + b."""
        from ..exact import Polynomial, factor
        f = Polynomial([self.b, self.a, 0, 1])
        return sorted(-g.coeffs[0] for g, _ in factor(f) if g.degree == 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, CurveQ) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"CurveQ(y^2 = x^3 + ({self.a})x + ({self.b}))"


def curve_new(a, b) -> CurveQ:
    return CurveQ(a, b)


class CurveFp:
    """Reduction of a short Weierstrass curve to F_p or F_{p^2}."""

    def __init__(self, p: int, a: int, b: int, f: int = 1):
        self.p = p
        self.f = f
        self.a = FqElement(p, f, a)
        self.b = FqElement(p, f, b)
        if (4 * a**3 + 27 * b**2) % p == 0:
            raise BadReduction(p)

    @property
    def j_tilde(self) -> int:
        a, b, p = self.a.a, self.b.a, self.p
        num = 1728 * 4 * a**3
        den = 4 * a**3 + 27 * b**2
        return num * pow(den, -1, p) % p

    def coeffs(self) -> tuple[int, int]:
        return self.a.a, self.b.a

    def elem(self, v) -> FqElement:
        if isinstance(v, FqElement):
            return v
        return FqElement(self.p, self.f, v)

    def point(self, x, y) -> Point:
        P = Point(self.elem(x), self.elem(y))
        if not self.contains(P):
            raise ValueError("point not on the reduced curve")
        return P

    def contains(self, P: Point) -> bool:
        return P.is_infinity or P.y * P.y == P.x * P.x * P.x + self.a * P.x + self.b

    def add(self, P: Point, Q: Point) -> Point:
        return _group_add(self.a, P, Q, None)

    def neg(self, P: Point) -> Point:
        return P if P.is_infinity else Point(P.x, -P.y)

    def mul(self, P: Point, n: int) -> Point:
        return _group_mul(self.add, self.neg, P, n)

    def points(self) -> list[Point]:
        """All points over F_p (f = 1 only, small p)."""
        if self.f != 1:
            raise ValueError("enumeration only over the prime field")
        p = self.p
        a, b = self.coeffs()
        roots: dict[int, list[int]] = {}
        for y in range(p):
            roots.setdefault(y * y % p, []).append(y)
        out = [INFINITY]
        for x in range(p):
            for y in roots.get((x**3 + a * x + b) % p, []):
                out.append(Point(self.elem(x), self.elem(y)))
        return out

    def __repr__(self) -> str:
        return f"CurveFp(y^2 = x^3 + {self.a.a}x + {self.b.a} over F_{self.p}{'^2' if self.f == 2 else ''})"


def reduce_mod(curve: CurveQ, p: int) -> CurveFp:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p < 5:
        raise PrimeTooSmall(f"p = {p} < 5")
    if curve.a.denominator % p == 0 or curve.b.denominator % p == 0:
        raise ValueError(f"p = {p} divides a coefficient denominator")
    a = curve.a.numerator * pow(curve.a.denominator, -1, p) % p
    b = curve.b.numerator * pow(curve.b.denominator, -1, p) % p
    return CurveFp(p, a, b)


@lru_cache(maxsize=4096)
def _count(p: int, a: int, b: int) -> int:
    xs = np.arange(p, dtype=np.int64)
    rhs = (xs * xs % p * xs + a * xs + b) % p
    is_sq = np.zeros(p, dtype=bool)
    is_sq[(xs * xs) % p] = True
    chi = np.where(rhs == 0, 0, np.where(is_sq[rhs], 1, -1))
    return int(p + 1 + chi.sum())


def count_points(curve: CurveFp) -> tuple[int, int]:
    """(#E(F_p), a_p) by the quadratic-character sum."""
    if curve.f != 1:
        raise ValueError("naive counting only over the prime field")
    p = curve.p
    if p > COUNT_GUARD:
        raise PrimeTooLarge(f"p = {p} exceeds the naive-count guard {COUNT_GUARD}")
    a, b = curve.coeffs()
    n = _count(p, a, b)
    ap = p + 1 - n
    if ap * ap > 4 * p:
        raise HasseViolation(f"|a_p| = {abs(ap)} > 2 sqrt({p})")
    return n, ap


def ap_of(curve: CurveQ, p: int) -> int:
    return count_points(reduce_mod(curve, p))[1]


def trace_q(a_p: int, p: int) -> int:
    """a_{p^2} = a_p^2 - 2p."""
    if not is_prime(p) or p < 5:
        raise PrimeTooSmall(f"p = {p} must be a prime >= 5")
    if a_p * a_p > 4 * p:
        raise HasseViolation(f"|a_p| = {abs(a_p)} > 2 sqrt({p})")
    a_q = a_p * a_p - 2 * p
    if a_p == 0:
        assert a_q == -2 * p
    return a_q


def naive_point_count(p: int, a: int, b: int) -> int:
    """Oracle: literal enumeration of solutions plus the point at infinity."""
    n = 1
    for x in range(p):
        for y in range(p):
            if (y * y - x**3 - a * x - b) % p == 0:
                n += 1
    return n


def isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None
