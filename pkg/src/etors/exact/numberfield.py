"""Number fields Q[x]/(g) with g monic, integral and irreducible.

Elements are stored as an integer numerator vector plus a positive common
denominator in the power basis 1, theta, ..., theta^(d-1).  Multiplication is
Kronecker-substituted integer multiplication followed by reduction with a
precomputed table of x^i mod g.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import mpmath

from . import zpoly as Z
from .factor import is_irreducible
from .poly import Polynomial
from .roots import complex_roots


class NumberField:
    def __init__(self, g: Polynomial | Sequence[int], check: bool = True, name: str = "theta"):
        g = g if isinstance(g, Polynomial) else Polynomial(g)
        if g.degree < 1 or g.lc != 1 or not g.is_integral():
            raise ValueError("defining polynomial must be monic with integer coefficients")
        if check and not is_irreducible(g):
            raise ValueError(f"defining polynomial {g} is reducible")
        self.g = g
        self.name = name
        self.d = g.degree
        self._gint = g.int_coeffs()
        self._table = self._reduction_table()
        self._power_sums = self._newton_power_sums()
        self._embeddings: dict[int, list] = {}

    # setup --------------------------------------------------------------
    def _reduction_table(self) -> list[list[int]]:
        """Rows r_i with x^(d+i) = sum_j r_i[j] x^j mod g, for 0 <= i <= d-2."""
        d = self.d
        low = [-c for c in self._gint[:d]]  # x^d = -(g_0 + ... )
        rows = []
        cur = low
        for _ in range(max(d - 1, 0)):
            rows.append(cur + [0] * (d - len(cur)))
            # multiply by x then reduce
            top = cur[d - 1] if len(cur) == d else 0
            shifted = [0] + cur[: d - 1]
            shifted += [0] * (d - len(shifted))
            cur = [shifted[j] + top * low[j] for j in range(d)]
        return rows

    def _newton_power_sums(self) -> list[int]:
        """p_k = sum of k-th powers of the roots of g, for k = 0..2d."""
        d = self.d
        c = self._gint  # ascending, monic
        # e-style coefficients: g = x^d + a_{d-1} x^{d-1} + ... + a_0
        a = {d - i: c[d - i] for i in range(1, d + 1)}  # a[k] coefficient of x^k
        ps = [d]
        for k in range(1, 2 * d + 1):
            s = 0
            for i in range(1, min(k, d + 1)):
                s += a[d - i] * ps[k - i]
            if k <= d:
                s += k * a[d - k]
            ps.append(-s)
        return ps

    # element construction -------------------------------------------------
    def __call__(self, coords) -> "NFElement":
        if isinstance(coords, NFElement):
            return coords
        if isinstance(coords, (int, Fraction)):
            return NFElement.from_fractions(self, [Fraction(coords)])
        if isinstance(coords, Polynomial):
            return NFElement.from_fractions(self, list((coords % self.g).coeffs))
        return NFElement.from_fractions(self, [Fraction(c) for c in coords])

    def gen(self) -> "NFElement":
        if self.d == 1:
            return self(-self._gint[0])
        return self([0, 1])

    def zero(self) -> "NFElement":
        return NFElement(self, [0] * self.d, 1)

    def one(self) -> "NFElement":
        return self(1)

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.g == other.g

    def __hash__(self) -> int:
        return hash(self.g)

    def __repr__(self) -> str:
        return f"NumberField({self.g})"

    # analytic data ------------------------------------------------------
    def embeddings(self, dps: int = 30, hints=None) -> list:
        """Complex roots of g as mpc values, in a fixed order."""
        if dps not in self._embeddings:
            eps = 10.0 ** (-min(dps - 5, 300))
            with mpmath.workdps(dps):
                balls = complex_roots(self.g, eps=max(eps, 1e-300), hints=hints)
            self._embeddings[dps] = [b.mid for b, _ in balls]
        return self._embeddings[dps]

    def set_embeddings(self, roots: list, dps: int) -> None:
        self._embeddings[dps] = list(roots)

    def reduce_int(self, coeffs: list[int]) -> list[int]:
        d = self.d
        out = list(coeffs[:d]) + [0] * max(0, d - len(coeffs))
        for i in range(d, len(coeffs)):
            c = coeffs[i]
            if c:
                row = self._table[i - d]
                for j in range(d):
                    if row[j]:
                        out[j] += c * row[j]
        return out


class NFElement:
    __slots__ = ("K", "num", "den")

    def __init__(self, K: NumberField, num: Sequence[int], den: int = 1):
        num = list(num) + [0] * (K.d - len(num))
        if len(num) > K.d:
            num = K.reduce_int(num)
        if den < 0:
            num, den = [-c for c in num], -den
        g = reduce(math.gcd, num, den)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.K = K
        self.num = tuple(num)
        self.den = den

    @classmethod
    def from_fractions(cls, K: NumberField, coords: Iterable[Fraction]) -> "NFElement":
        coords = [Fraction(c) for c in coords]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coords), 1)
        nums = [int(c * den) for c in coords]
        return cls(K, nums, den)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.coords)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.K(other)
        if not isinstance(other, NFElement):
            return NotImplemented
        return self.K == other.K and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"NFElement({self.as_polynomial()} in {self.K})"

    # arithmetic ---------------------------------------------------------
    def _lift(self, other) -> "NFElement":
        if isinstance(other, NFElement):
            return other
        return self.K(other)

    def __add__(self, other) -> "NFElement":
        o = self._lift(other)
        den = self.den * o.den // math.gcd(self.den, o.den)
        fa, fb = den // self.den, den // o.den
        return NFElement(self.K, [a * fa + b * fb for a, b in zip(self.num, o.num)], den)

    __radd__ = __add__

    def __neg__(self) -> "NFElement":
        return NFElement(self.K, [-a for a in self.num], self.den)

    def __sub__(self, other) -> "NFElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "NFElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "NFElement":
        if isinstance(other, int):
            return NFElement(self.K, [a * other for a in self.num], self.den)
        if isinstance(other, Fraction):
            return NFElement(self.K, [a * other.numerator for a in self.num], self.den * other.denominator)
        o = self._lift(other)
        prod = Z.mul(Z.trim(list(self.num)), Z.trim(list(o.num)))
        return NFElement(self.K, self.K.reduce_int(prod) if prod else [0] * self.K.d, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "NFElement":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.K.one(), self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __truediv__(self, other) -> "NFElement":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "NFElement":
        return self._lift(other) * self.inverse()

    def inverse(self) -> "NFElement":
        """Inverse via Cayley-Hamilton on the characteristic polynomial."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        if self.is_rational():
            return self.K(1 / self.coords[0])
        chi, powers = _charpoly_with_powers(self)
        # chi(x) = x^d + c_{d-1} x^{d-1} + ... + c_0, alpha^{-1} = -(sum_{k>=1} c_k alpha^{k-1}) / c_0
        c = chi.coeffs
        acc = self.K.zero()
        for k in range(1, len(c)):
            if c[k]:
                acc = acc + powers[k - 1] * c[k]
        return acc * (-1 / c[0])

    # invariants ---------------------------------------------------------
    def trace(self) -> Fraction:
        ps = self.K._power_sums
        return Fraction(sum(a * ps[i] for i, a in enumerate(self.num)), self.den)

    def charpoly(self) -> Polynomial:
        return _charpoly_with_powers(self)[0]

    def norm(self) -> Fraction:
        chi = self.charpoly()
        return chi.coeffs[0] * (-1) ** self.K.d

    def embed(self, roots=None, dps: int = 30) -> list:
        """Values of the element under every complex embedding of K."""
        if roots is None:
            roots = self.K.embeddings(dps)
        coeffs = list(self.num)
        out = []
        for r in roots:
            acc = mpmath.mpc(0)
            for c in reversed(coeffs):
                acc = acc * r + c
            out.append(acc / self.den)
        return out


def _charpoly_with_powers(e: NFElement) -> tuple[Polynomial, list[NFElement]]:
    """Characteristic polynomial of multiplication by e, via traces of powers.

    With e = A / D and A integral, the power sums Tr(A^k) are integers and the
    Newton identities k e_k = sum_{i=1}^{k} (-1)^(i-1) e_{k-i} p_i divide exactly.
    """
    K = e.K
    d = K.d
    A = NFElement.__new__(NFElement)
    A.K, A.num, A.den = K, e.num, 1
    ps_theta = K._power_sums
    powers_A = [A]
    cur = A
    traces = [sum(a * ps_theta[i] for i, a in enumerate(cur.num))]
    for _ in range(d - 1):
        cur = cur * A
        powers_A.append(cur)
        traces.append(sum(a * ps_theta[i] for i, a in enumerate(cur.num)))
    es = [1]
    for k in range(1, d + 1):
        s = 0
        for i in range(1, k + 1):
            term = es[k - i] * traces[i - 1]
            s += term if i % 2 == 1 else -term
        assert s % k == 0, "non-integral Newton identity step"
        es.append(s // k)
    # chi_A(x) = sum_k (-1)^k e_k x^(d-k); chi_e(x) = D^(-d) chi_A(D x)
    D = e.den
    coeffs = [Fraction(0)] * (d + 1)
    for k in range(d + 1):
        coeffs[d - k] = Fraction((-1) ** k * es[k], D**k)
    chi = Polynomial(coeffs)
    powers_e = [NFElement(K, list(pa.num), D ** (i + 1)) for i, pa in enumerate(powers_A)]
    powers_e.insert(0, K.one())
    return chi, powers_e


def nf_min_poly(K: NumberField, e: NFElement, verify: bool = False) -> Polynomial:
    """Monic minimal polynomial of e over Q.

    The characteristic polynomial of multiplication by e is a power of the
    minimal polynomial, so its monic square-free part is the minimal
    polynomial itself.
    """
    if e.K != K:
        raise ValueError("element does not belong to the given field")
    if e.is_rational():
        return Polynomial([-e.coords[0], 1])
    chi = e.charpoly()
    m = chi.radical()
    if verify:
        val = m.eval_with(e, K)
        if not val.is_zero():
            raise ArithmeticError("minimal polynomial does not annihilate the element")
    return m
