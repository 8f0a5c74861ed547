"""Dense univariate polynomials over the rationals.

Coefficients are stored ascending as a tuple of ``Fraction``.  The class is
immutable; every operation returns a new polynomial.  Integer-coefficient
kernels used by the factoring code live in :mod:`etors.exact.zpoly`.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from . import zpoly


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # construction -------------------------------------------------------
    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c=1) -> "Polynomial":
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        out = cls([1])
        for r in roots:
            out = out * cls([-_frac(r), 1])
        return out

    @classmethod
    def parse(cls, text: str, var: str = "x") -> "Polynomial":
        """Parse strings such as ``"x^3-2"``, ``"3*x**2 + x/2 - 1"``."""
        s = text.replace(" ", "").replace("**", "^")
        if not s:
            raise ValueError("empty polynomial string")
        if s[0] not in "+-":
            s = "+" + s
        term_re = re.compile(
            rf"([+-])(\d+(?:/\d+)?)?\*?({re.escape(var)}(?:\^(\d+))?)?(?:/(\d+))?"
        )
        pos = 0
        acc: dict[int, Fraction] = {}
        while pos < len(s):
            m = term_re.match(s, pos)
            if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse polynomial {text!r} near position {pos}")
            sign = -1 if m.group(1) == "-" else 1
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(5):
                coef /= int(m.group(5))
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) else 1
            else:
                exp = 0
            acc[exp] = acc.get(exp, Fraction(0)) + sign * coef
            pos = m.end()
        deg = max(acc)
        return cls([acc.get(i, 0) for i in range(deg + 1)])

    # basic queries ------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial reported as -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return Polynomial()
        num_a, den_a = self.integer_form()
        num_b, den_b = o.integer_form()
        prod = zpoly.mul(num_a, num_b)
        den = den_a * den_b
        return Polynomial([Fraction(c, den) for c in prod])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Polynomial([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        inv_lc = 1 / o.lc
        od = o.degree
        for k in range(dq, -1, -1):
            c = rem[k + od] * inv_lc
            quot[k] = c
            if c:
                for j in range(od + 1):
                    rem[k + j] -= c * o.coeffs[j]
        return Polynomial(quot), Polynomial(rem[:od])

    def __floordiv__(self, other) -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other) -> "Polynomial":
        return self.divmod(other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "Polynomial":
        return Polynomial([i * self.coeffs[i] for i in range(1, len(self.coeffs))])

    def __call__(self, value):
        """Horner evaluation; works for any ring element supporting + and *."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return Fraction(0)
        return acc

    def eval_with(self, value, convert):
        """Horner evaluation with coefficients mapped through ``convert``."""
        acc = convert(Fraction(0))
        for c in reversed(self.coeffs):
            acc = acc * value + convert(c)
        return acc

    def compose(self, inner: "Polynomial") -> "Polynomial":
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, t) -> "Polynomial":
        """Return f(x + t)."""
        return self.compose(Polynomial([t, 1]))

    def reverse(self) -> "Polynomial":
        """Return x^deg f(1/x)."""
        return Polynomial(list(reversed(self.coeffs)))

    def scale_var(self, c) -> "Polynomial":
        """Return f(c x)."""
        c = _frac(c)
        return Polynomial([a * c**i for i, a in enumerate(self.coeffs)])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return Polynomial([c * inv for c in self.coeffs])

    # integer forms ------------------------------------------------------
    def integer_form(self) -> tuple[list[int], int]:
        """Return (integer coefficients, d) with self = ints / d and d > 0 minimal."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.coeffs], den

    def primitive(self) -> "Polynomial":
        """Primitive integer polynomial with positive leading coefficient."""
        if self.is_zero():
            return self
        ints, _ = self.integer_form()
        g = reduce(math.gcd, ints)
        if ints[-1] < 0:
            g = -g
        return Polynomial([c // g for c in ints])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [c.numerator for c in self.coeffs]

    # gcd and square-free structure --------------------------------------
    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd, computed over the integers with a modular shortcut."""
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        a = self.primitive().int_coeffs()
        b = other.primitive().int_coeffs()
        g = zpoly.gcd_z(a, b)
        return Polynomial(g).monic()

    def is_squarefree(self) -> bool:
        if self.degree <= 1:
            return True
        return self.gcd(self.derivative()).degree == 0

    def squarefree_decomposition(self) -> list[tuple["Polynomial", int]]:
        """Yun's algorithm: list of (monic squarefree factor, multiplicity)."""
        if self.degree < 1:
            return []
        f = self.monic()
        out: list[tuple[Polynomial, int]] = []
        fp = f.derivative()
        a = f.gcd(fp)
        b = f.exact_div(a)
        c = fp.exact_div(a) if a.degree > 0 else fp
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            a = b.gcd(d)
            b = b.exact_div(a)
            c = d.exact_div(a)
            if a.degree > 0:
                out.append((a, i))
            i += 1
            d = c - b.derivative()
        return out

    def radical(self) -> "Polynomial":
        """Monic square-free part (product of distinct irreducible factors)."""
        if self.degree < 1:
            return self.monic()
        if self.is_squarefree():
            return self.monic()
        g = self.gcd(self.derivative())
        return self.exact_div(g).monic()


def poly_from_ints(coeffs: Sequence[int]) -> Polynomial:
    return Polynomial(coeffs)


def cyclotomic(n: int) -> Polynomial:
    """The n-th cyclotomic polynomial."""
    return Polynomial(zpoly.cyclotomic(n))


def resultant(f: Polynomial, g: Polynomial) -> Fraction:
    """Resultant via the Euclidean remainder sequence over the rationals."""
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    res = Fraction(1)
    a, b = f, g
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return Fraction(0)
        da, db, dr = a.degree, b.degree, r.degree
        res *= b.lc ** (da - dr)
        if da % 2 == 1 and db % 2 == 1:
            res = -res
        a, b = b, r
    if b.is_zero():
        return Fraction(0)
    return res * b.lc ** a.degree


def discriminant(f: Polynomial) -> Fraction:
    n = f.degree
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc
