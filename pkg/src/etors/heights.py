"""Absolute logarithmic Weil height through the Mahler measure.

For an algebraic number with primitive minimal polynomial
a_d x^d + ... + a_0 = a_d prod (x - alpha_i) we use

    h(alpha) = (log a_d + sum_i log max(1, |alpha_i|)) / d,

which equals the sum over places: Gauss's lemma turns the finite places into
the single term log(a_d).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .exact import Polynomial, complex_roots, cyclotomic, factor, is_irreducible, nf_min_poly
from .exact.arith import euler_phi, factorint
from .exact.roots import ComplexBall

HEIGHT_TOL = 1e-10
IDENTITY_TOL = 1e-9


class NotAlgebraicNumberInput(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    """Primitive integer minimal polynomial plus one distinguished root."""

    minpoly: Polynomial
    root: ComplexBall

    def __post_init__(self):
        f = self.minpoly
        if f.degree < 1 or not f.is_integral():
            raise NotAlgebraicNumberInput("minimal polynomial must have integer coefficients")
        if f.primitive() != f:
            raise NotAlgebraicNumberInput(f"minimal polynomial {f} is not primitive with positive leading term")
        if not is_irreducible(f):
            raise NotAlgebraicNumberInput(f"minimal polynomial {f} is reducible")

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @classmethod
    def from_minpoly(cls, f: Polynomial | str, near: complex | None = None, index: int = 0) -> "AlgebraicNumber":
        """Build from any rational multiple of an irreducible polynomial.

        The distinguished root is the one nearest ``near`` when given,
        otherwise the ``index``-th root in the order real roots (descending)
        then complex roots with positive imaginary part first.
        """
        if isinstance(f, str):
            f = Polynomial.parse(f)
        prim = f.primitive()
        if prim.degree < 1:
            raise NotAlgebraicNumberInput("constant polynomial")
        if not is_irreducible(prim):
            raise NotAlgebraicNumberInput(f"{f} is reducible")
        roots = _sorted_roots(prim)
        if near is not None:
            ball = min(roots, key=lambda b: abs(b.mid - mpmath.mpc(near)))
        else:
            ball = roots[index % len(roots)]
        obj = cls.__new__(cls)
        object.__setattr__(obj, "minpoly", prim)
        object.__setattr__(obj, "root", ball)
        object.__setattr__(obj, "_conj", roots)
        return obj

    @classmethod
    def from_field_element(cls, K, e, values=None) -> "AlgebraicNumber":
        """Element of a number field, with its complex embedding values as root hints.

        The minimal polynomial comes from nf_min_poly.  A characteristic
        polynomial is a power of an irreducible one, so its radical needs no
        factoring pass.
        """
        prim = nf_min_poly(K, e).primitive()
        hints = None
        if values is not None:
            distinct: list = []
            for v in values:
                if all(abs(v - w) > 1e-12 * max(1, abs(v)) for w in distinct):
                    distinct.append(v)
            if len(distinct) == prim.degree:
                hints = distinct
        balls = [b for b, _ in complex_roots(prim, eps=1e-15, hints=hints)]
        roots = sorted(balls, key=lambda b: (0 if abs(b.center.imag) <= b.radius else 1, -b.center.real,
                                             -b.center.imag))
        obj = cls.__new__(cls)
        object.__setattr__(obj, "minpoly", prim)
        object.__setattr__(obj, "root", roots[0])
        object.__setattr__(obj, "_conj", roots)
        return obj

    @classmethod
    def rational(cls, c) -> "AlgebraicNumber":
        c = Fraction(c)
        return cls.from_minpoly(Polynomial([-c, 1]))

    def conjugates(self) -> list[ComplexBall]:
        cached = getattr(self, "_conj", None)
        if cached is None:
            cached = _sorted_roots(self.minpoly)
            object.__setattr__(self, "_conj", cached)
        return cached

    def conjugate(self, i: int) -> "AlgebraicNumber":
        obj = AlgebraicNumber.__new__(AlgebraicNumber)
        object.__setattr__(obj, "minpoly", self.minpoly)
        object.__setattr__(obj, "root", self.conjugates()[i])
        object.__setattr__(obj, "_conj", self.conjugates())
        return obj

    def is_zero(self) -> bool:
        return self.minpoly.degree == 1 and self.minpoly.coeffs[0] == 0

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        c = self.minpoly.coeffs
        return -c[0] / c[1]

    def __repr__(self) -> str:
        z = self.root.center
        return f"AlgebraicNumber({self.minpoly}, root~{z.real:.6g}{z.imag:+.6g}j)"


def _sorted_roots(f: Polynomial) -> list[ComplexBall]:
    balls = [b for b, _ in complex_roots(f, eps=1e-15)]

    def key(b):
        z = b.center
        real = abs(z.imag) <= b.radius
        return (0 if real else 1, -z.real, -z.imag)

    return sorted(balls, key=key)


@dataclass
class HeightProfile:
    h: float
    archimedean: list[float]
    finite_aggregate: float
    degree: int
    leading_coefficient: int
    error_bound: float
    local_degrees: dict = field(default_factory=dict)
    finite_places: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "h": self.h,
            "degree": self.degree,
            "leading_coefficient": self.leading_coefficient,
            "finite_aggregate": self.finite_aggregate,
            "archimedean": self.archimedean,
            "error_bound": self.error_bound,
            "tolerance": HEIGHT_TOL,
            "local_degrees": self.local_degrees,
        }
        if self.finite_places is not None:
            out["finite_places"] = {str(p): v for p, v in self.finite_places.items()}
        return out


def weil_height(alpha: AlgebraicNumber) -> HeightProfile:
    f = alpha.minpoly
    d = f.degree
    ad = f.lc.numerator
    conj = alpha.conjugates()
    with mpmath.workdps(40):
        arch = [mpmath.log(max(mpmath.mpf(1), abs(b.mid))) for b in conj]
        fin = mpmath.log(ad) / d
        h = fin + mpmath.fsum(arch) / d
    # log max(1, |z|) is 1-Lipschitz in z, so each radius bounds its term's error
    err = sum(b.radius for b in conj) / d + 1e-30
    if err > HEIGHT_TOL:
        raise ArithmeticError("height error budget exceeded")
    real = sum(1 for b in conj if abs(b.center.imag) <= b.radius)
    local = {"real_places": real, "complex_places": (d - real) // 2,
             "finite": "sum of local degrees above each prime equals the degree"}
    finite_places = None
    if d == 1 and not alpha.is_zero():
        q = alpha.as_rational()
        finite_places = {}
        for p in sorted(set(factorint(q.numerator)) | set(factorint(q.denominator)) if q.numerator else []):
            v = _vp(q, p)
            finite_places[p] = max(0.0, -v * math.log(p))
    return HeightProfile(h=float(h), archimedean=[float(a) for a in arch], finite_aggregate=float(fin),
                         degree=d, leading_coefficient=ad, error_bound=float(err), local_degrees=local,
                         finite_places=finite_places)


def _vp(q: Fraction, p: int) -> int:
    v = 0
    n, m = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while m % p == 0:
        m //= p
        v -= 1
    return v


def height(alpha: AlgebraicNumber) -> float:
    return weil_height(alpha).h


def is_root_of_unity(alpha: AlgebraicNumber) -> int | None:
    """Order n when the minimal polynomial is the n-th cyclotomic polynomial."""
    f = alpha.minpoly
    d = f.degree
    if f.lc != 1 or abs(f.coeffs[0]) != 1:
        return None
    for n in range(1, 2 * d * d + 3):
        if euler_phi(n) == d and cyclotomic(n) == f:
            return n
    return None


# ---------------------------------------------------------------------------
# derived algebraic numbers through power sums of conjugates


def power_sums(f: Polynomial, count: int) -> list[Fraction]:
    """s_k = sum of k-th powers of the roots of f, for k = 0..count."""
    g = f.monic()
    d = g.degree
    a = g.coeffs  # ascending, a[d] = 1
    s = [Fraction(d)]
    for k in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, min(k, d + 1)):
            acc += a[d - i] * s[k - i]
        if k <= d:
            acc += k * a[d - k]
        s.append(-acc)
    return s


def poly_from_power_sums(s: Sequence[Fraction], n: int) -> Polynomial:
    """Monic degree-n polynomial whose roots have power sums s_1..s_n."""
    e = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            t = e[k - i] * s[i]
            acc += t if i % 2 == 1 else -t
        e.append(acc / k)
    return Polynomial([(-1) ** (n - i) * e[n - i] for i in range(n + 1)])


def _pick_factor(f: Polynomial, target: complex) -> AlgebraicNumber:
    best = None
    for g, _ in factor(f):
        cand = AlgebraicNumber.from_minpoly(g, near=target)
        dist = abs(cand.root.center - target)
        if best is None or dist < best[0]:
            best = (dist, cand)
    return best[1]


def product(alpha: AlgebraicNumber, beta: AlgebraicNumber) -> AlgebraicNumber:
    """alpha * beta for the distinguished roots."""
    n = alpha.degree * beta.degree
    sa = power_sums(alpha.minpoly, n)
    sb = power_sums(beta.minpoly, n)
    chi = poly_from_power_sums([x * y for x, y in zip(sa, sb)], n)
    return _pick_factor(chi, alpha.root.center * beta.root.center)


def power(alpha: AlgebraicNumber, k: int) -> AlgebraicNumber:
    if k == 0:
        return AlgebraicNumber.rational(1)
    if k < 0:
        return power(inverse(alpha), -k)
    d = alpha.degree
    s = power_sums(alpha.minpoly, d * k)
    chi = poly_from_power_sums([s[j * k] for j in range(d + 1)], d)
    return _pick_factor(chi, alpha.root.center ** k)


def inverse(alpha: AlgebraicNumber) -> AlgebraicNumber:
    if alpha.is_zero():
        raise ZeroDivisionError("inverse of zero")
    return AlgebraicNumber.from_minpoly(alpha.minpoly.reverse(), near=1 / alpha.root.center)


def root_of_unity(n: int, j: int = 1) -> AlgebraicNumber:
    z = complex(mpmath.expj(2 * mpmath.pi * j / n))
    return AlgebraicNumber.from_minpoly(cyclotomic(n), near=z)


# ---------------------------------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "passed": self.passed, "tolerance": IDENTITY_TOL, "note": self.note}


def height_identity_suite(alpha: AlgebraicNumber, beta: AlgebraicNumber, k: int,
                          zeta_orders: Sequence[int] = (3, 4), degree_cap: int = 64) -> list[IdentityCheck]:
    """Check the basic height identities; failures are reported, never raised."""
    out: list[IdentityCheck] = []
    ha, hb = height(alpha), height(beta)

    def record(name, lhs, rhs, inequality=False, note=""):
        slack = (rhs - lhs) if inequality else abs(lhs - rhs)
        ok = slack >= -IDENTITY_TOL if inequality else slack <= IDENTITY_TOL
        out.append(IdentityCheck(name, float(lhs), float(rhs), float(slack), bool(ok), note))

    if alpha.degree * beta.degree <= degree_cap:
        hab = height(product(alpha, beta))
        record("submultiplicativity h(ab) <= h(a)+h(b)", hab, ha + hb, inequality=True)
    else:
        out.append(IdentityCheck("submultiplicativity h(ab) <= h(a)+h(b)", ha + hb, ha + hb, 0.0, True,
                                 "skipped: product degree above cap"))
    nonzero = not alpha.is_zero()
    if nonzero:
        if alpha.degree * abs(k) <= 4 * degree_cap:
            hk = height(power(alpha, k))
            record(f"homogeneity h(a^{k}) = |{k}| h(a)", hk, abs(k) * ha)
        hinv = height(inverse(alpha))
        record("inverse h(1/a) = h(a)", hinv, ha)
        for n in zeta_orders:
            z = root_of_unity(n)
            if alpha.degree * z.degree > degree_cap:
                continue
            hz = height(product(alpha, z))
            record(f"root of unity h(zeta_{n} a) = h(a)", hz, ha)
    hs = [height(alpha.conjugate(i)) for i in range(alpha.degree)]
    record("conjugation invariance", max(hs), min(hs))
    return out


def sample_algebraic_numbers(count: int, seed: int, max_degree: int = 6, coeff_bound: int = 6,
                             exclude_roots_of_unity: bool = True) -> list[AlgebraicNumber]:
    """Seeded irreducible minimal polynomials of degree <= max_degree."""
    rng = random.Random(seed)
    out: list[AlgebraicNumber] = []
    while len(out) < count:
        d = rng.randint(1, max_degree)
        coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(d)] + [rng.randint(1, coeff_bound)]
        f = Polynomial(coeffs)
        if f.coeffs[0] == 0 or f.degree < 1:
            continue
        f = f.primitive()
        if not is_irreducible(f):
            continue
        a = AlgebraicNumber.from_minpoly(f, index=rng.randrange(f.degree))
        if exclude_roots_of_unity and is_root_of_unity(a) is not None:
            continue
        out.append(a)
    return out
