"""Formal group of y^2 = x^3 + a x + b in the parameter T = -x/y.

Series are truncated modulo T^(prec+1).  Coefficients may be int, Fraction or
UnramifiedElement: everything below uses only ring operations, so the same
code computes [m](T) over Z or over Z_{p^f}/p^k.

The group law comes from the chord through (T1, w(T1)) and (T2, w(T2)) with
w = -1/y.  Writing lambda = (w(T2) - w(T1)) / (T2 - T1) and
nu = w(T1) - lambda T1, the third intersection T3 satisfies

    T1 + T2 + T3 = -(2 a lambda nu + 3 b lambda^2 nu) / (1 + a lambda^2 + b lambda^3)

and the inverse is T -> -T, so F(T1, T2) = -T3.  The difference quotient is the
polynomial sum_n w_n h_{n-1}(T1, T2) with h_k the complete homogeneous
polynomial of degree k, so no series division occurs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..elliptic.curves import CurveQ, ap_of
from ..exact.arith import is_prime
from .unramified import UnramifiedElement, UnramifiedRing

MAX_PREC = 64


class TruncationTooSmall(ValueError):
    pass


class NotSupersingular(ValueError):
    pass


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, UnramifiedElement) else c == 0


class FormalSeries:
    """sum_{i <= prec} c_i T^i, known modulo T^(prec+1)."""

    __slots__ = ("coeffs", "prec", "zero")

    def __init__(self, coeffs, prec: int, zero=0):
        c = list(coeffs[: prec + 1])
        c += [zero] * (prec + 1 - len(c))
        self.coeffs, self.prec, self.zero = c, prec, zero

    @classmethod
    def T(cls, prec: int, zero=0, one=1) -> "FormalSeries":
        return cls([zero, one], prec, zero)

    def _like(self, coeffs) -> "FormalSeries":
        return FormalSeries(coeffs, self.prec, self.zero)

    def order(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return i
        return None

    def __add__(self, o):
        if not isinstance(o, FormalSeries):
            return self._like([self.coeffs[0] + o] + self.coeffs[1:])
        return self._like([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return self._like([-a for a in self.coeffs])

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, FormalSeries):
            return self._like([a * o for a in self.coeffs])
        n = self.prec
        out = [self.zero] * (n + 1)
        a_nz = [(i, a) for i, a in enumerate(self.coeffs) if not _is_zero(a)]
        b_nz = [(j, b) for j, b in enumerate(o.coeffs) if not _is_zero(b)]
        for i, a in a_nz:
            lim = n - i
            for j, b in b_nz:
                if j > lim:
                    break
                out[i + j] = out[i + j] + a * b
        return self._like(out)

    __rmul__ = __mul__

    def inverse_one_plus(self) -> "FormalSeries":
        """(1 + self)^{-1} for self of positive order, as a finite geometric sum."""
        v = self.order()
        one = self.zero + 1
        result = self._like([one])
        if v is None:
            return result
        if v == 0:
            raise ValueError("need positive order")
        term = result
        for _ in range(self.prec // v):
            term = -(term * self)
            result = result + term
        return result

    def __eq__(self, o) -> bool:
        return isinstance(o, FormalSeries) and self.prec == o.prec and all(
            _is_zero(a - b) for a, b in zip(self.coeffs, o.coeffs))

    def __repr__(self) -> str:
        terms = [f"({c})*T^{i}" for i, c in enumerate(self.coeffs) if not _is_zero(c)]
        return " + ".join(terms) + f" + O(T^{self.prec + 1})" if terms else f"O(T^{self.prec + 1})"


def w_series(a, b, prec: int, zero=0, one=1) -> FormalSeries:
    """w(T) = T^3 + a T w^2 + b w^3 by fixed-point iteration (each pass fixes at least two more terms)."""
    T = FormalSeries.T(prec, zero, one)
    T3 = T * T * T
    w = T3
    for _ in range(prec // 2 + 2):
        w2 = w * w
        nxt = T3 + T * w2 * a + w2 * w * b
        if nxt == w:
            break
        w = nxt
    return w


@dataclass
class FormalGroup:
    a: object
    b: object
    prec: int
    zero: object = 0
    one: object = 1

    def __post_init__(self):
        if not 1 <= self.prec <= MAX_PREC:
            raise TruncationTooSmall(f"prec must lie in [1, {MAX_PREC}]")
        self.w = w_series(self.a, self.b, self.prec, self.zero, self.one)
        self._mul_cache: dict[int, FormalSeries] = {}

    def T(self) -> FormalSeries:
        return FormalSeries.T(self.prec, self.zero, self.one)

    def add(self, A: FormalSeries, B: FormalSeries) -> FormalSeries:
        """F(A, B) for series A, B of positive order in a common variable (univariate substitution)."""
        n = self.prec
        wc = self.w.coeffs
        # h_k(A, B) = A h_{k-1} + B^k, lambda = sum_{m >= 3} w_m h_{m-1}
        h = A._like([self.one])
        Bk = h
        lam = A._like([])
        wA = A._like([])
        Ak = h
        for k in range(1, n + 1):
            Bk = Bk * B
            h = A * h + Bk
            Ak = Ak * A
            if k + 1 <= n and not _is_zero(wc[k + 1]):
                lam = lam + h * wc[k + 1]
            if not _is_zero(wc[k]):
                wA = wA + Ak * wc[k]
        nu = wA - lam * A
        lam2 = lam * lam
        num = (lam * nu) * (2 * self.a) + (lam2 * nu) * (3 * self.b)
        den = lam2 * self.a + lam2 * lam * self.b
        return A + B + num * den.inverse_one_plus()

    def inverse(self, A: FormalSeries) -> FormalSeries:
        return -A

    def mul(self, m: int) -> FormalSeries:
        """[m](T) by double-and-add on F."""
        if m in self._mul_cache:
            return self._mul_cache[m]
        if m < 0:
            r = -self.mul(-m)
        elif m == 0:
            r = self.T() * self.zero
        elif m == 1:
            r = self.T()
        elif m % 2 == 0:
            half = self.mul(m // 2)
            r = self.add(half, half)
        else:
            r = self.add(self.mul(m - 1), self.T())
        self._mul_cache[m] = r
        return r


def formal_group(curve, T_prec: int) -> FormalGroup:
    """Formal group of an integral short model; `curve` is a CurveQ or a pair (a, b) of ring elements."""
    if isinstance(curve, CurveQ):
        if not curve.is_integral():
            raise ValueError("integral a, b required")
        return FormalGroup(int(curve.a), int(curve.b), T_prec)
    a, b = curve
    if isinstance(a, UnramifiedElement):
        R = a.ring
        return FormalGroup(a, R(b), T_prec, R.zero(), R.one())
    return FormalGroup(a, b, T_prec)


# ---------------------------------------------------------------------------
# independent route: [m] = exp(m log T) over Q


def _series_div(num: list, den: list, n: int) -> list:
    out = []
    rem = list(num) + [0] * (n + 1 - len(num))
    d0 = Fraction(den[0])
    for i in range(n + 1):
        c = rem[i] / d0
        out.append(c)
        for j in range(1, min(len(den), n + 1 - i)):
            rem[i + j] -= c * den[j]
    return out


def formal_log(a, b, prec: int) -> list[Fraction]:
    """log(T) = integral of the invariant differential dx/(2y) = (T w' - w) / (2 w) dT."""
    w = w_series(Fraction(a), Fraction(b), prec + 3, Fraction(0), Fraction(1)).coeffs
    # divide T w' - w and w by T^3 before the series division
    tw = [(i - 1) * w[i] for i in range(len(w))]
    omega = _series_div([c / 2 for c in tw[3:]], w[3:], prec)
    log = [Fraction(0)] * (prec + 1)
    for i in range(prec):
        log[i + 1] = omega[i] / (i + 1)
    return log


def _compose(f: list, g: list, n: int) -> list:
    """f(g(T)) mod T^(n+1) for g of positive order."""
    out = [Fraction(0)] * (n + 1)
    for c in reversed(f):
        # out = out * g + c
        new = [Fraction(0)] * (n + 1)
        for i, x in enumerate(out):
            if x:
                for j in range(1, n + 1 - i):
                    if g[j]:
                        new[i + j] += x * g[j]
        new[0] += c
        out = new
    return out


def formal_exp(log: list[Fraction], prec: int) -> list[Fraction]:
    """Compositional inverse of log by solving log(E(T)) = T one coefficient at a time."""
    E = [Fraction(0), Fraction(1)] + [Fraction(0)] * (prec - 1)
    for n in range(2, prec + 1):
        c = _compose(log, E, n)[n]
        E[n] = -c  # log has linear coefficient 1
    return E[: prec + 1]


def mul_via_log(a, b, m: int, prec: int) -> list[Fraction]:
    L = formal_log(a, b, prec)
    return _compose(formal_exp(L, prec), [x * m for x in L], prec)


# ---------------------------------------------------------------------------
# Lubin-Tate signature


@dataclass
class LubinTateReport:
    p: int
    q: int
    T_prec: int
    sign: int
    a_p: int | None
    nonzero_below_q: list[int]
    nonzero_above_q: list[int]
    leading_residue: list[int]

    def to_dict(self) -> dict:
        return {
            "p": self.p, "q": self.q, "T_prec": self.T_prec, "sign": self.sign, "a_p": self.a_p,
            "nonzero_mod_p_below_q": self.nonzero_below_q, "nonzero_mod_p_above_q": self.nonzero_above_q,
            "coefficient_of_T^q_mod_p": self.leading_residue,
        }


def _residue_field_trace(a: UnramifiedElement, b: UnramifiedElement) -> int:
    """p^f + 1 - #E(F_{p^f}) by enumerating the residue field."""
    small = UnramifiedRing(a.ring.p, a.ring.f, 1)
    A, B = small(list(a.residue())), small(list(b.residue()))
    if (4 * A**3 + 27 * B**2).is_zero():
        raise ValueError("bad reduction")
    squares: dict = {}
    elems = list(small.residues())
    for y in elems:
        s = (y * y).coords
        squares[s] = squares.get(s, 0) + 1
    n = 1
    for x in elems:
        n += squares.get((x * x * x + A * x + B).coords, 0)
    return small.p**small.f + 1 - n


def _residue(c, p: int) -> tuple[int, ...]:
    if isinstance(c, UnramifiedElement):
        return c.residue()
    c = Fraction(c)
    return (c.numerator * pow(c.denominator, -1, p) % p,)


def lubin_tate_signature(curve, p: int, T_prec: int | None = None) -> LubinTateReport:
    """Sign s with [p](T) = s T^q mod p, q = p^2, for a model supersingular at p."""
    if not is_prime(p) or p < 5:
        raise ValueError("p must be a prime >= 5")
    q = p * p
    T_prec = q + 1 if T_prec is None else T_prec
    if T_prec < q + 1 or T_prec > MAX_PREC:
        raise TruncationTooSmall(f"T_prec must lie in [{q + 1}, {MAX_PREC}]")
    if isinstance(curve, CurveQ):
        a_p = ap_of(curve, p)
        if a_p % p:
            raise NotSupersingular(f"a_{p} = {a_p} is not divisible by {p}")
        FG = formal_group(curve, T_prec)
    else:
        a, b = curve
        if a.ring.p != p:
            raise ValueError("coefficient ring has the wrong residue characteristic")
        a_p = None
        t = _residue_field_trace(a, b)
        if t % p:
            raise NotSupersingular(f"trace {t} over the residue field is not divisible by {p}")
        # congruences mod p only need the coefficients mod p
        R1 = UnramifiedRing(p, a.ring.f, 1)
        FG = formal_group((R1(list(a.residue())), R1(list(b.residue()))), T_prec)
    series = FG.mul(p).coeffs
    res = [_residue(c, p) for c in series]
    nz = [i for i in range(1, T_prec + 1) if i != q and any(res[i])]
    lead = res[q]
    zero_tail = (0,) * (len(lead) - 1)
    if lead == (1,) + zero_tail:
        sign = 1
    elif lead == (p - 1,) + zero_tail:
        sign = -1
    else:
        sign = 0
    return LubinTateReport(p, q, T_prec, sign, a_p, [i for i in nz if i < q], [i for i in nz if i > q], list(lead))


def cyclotomic_valuation(p: int, n: int = 1) -> Fraction:
    """v_p(zeta_{p^n} - 1) from the Newton polygon of Phi_{p^n}(x + 1), which must be Eisenstein."""
    from ..exact.zpoly import cyclotomic
    phi = cyclotomic(p**n)
    # Taylor shift x -> x + 1
    shifted = [0] * len(phi)
    for c in reversed(phi):
        for i in range(len(shifted) - 1, 0, -1):
            shifted[i] += shifted[i - 1]
        shifted[0] += c
    deg = len(shifted) - 1
    if shifted[deg] != 1 or any(c % p for c in shifted[:deg]) or shifted[0] % (p * p) == 0:
        raise ArithmeticError("shifted cyclotomic polynomial is not Eisenstein")
    v0 = 0
    c = shifted[0]
    while c % p == 0:
        c //= p
        v0 += 1
    return Fraction(v0, deg)
