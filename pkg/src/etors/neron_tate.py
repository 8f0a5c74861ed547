"""Neron-Tate height of rational points on y^2 = x^3 + a x + b.

Normalisation: h(P) = h(x(P)) / 2 and hhat(P) = lim h(2^k P) / 4^k.  Two
routes are implemented and kept separate:

* nt_height_limit doubles the x-coordinate exactly and certifies the tail
  with an explicit bound on |h(2Q) - 4 h(Q)|;
* nt_height_local sums local heights: the q-series at the infinite place,
  max(0, log|x|_p)/2 at good primes, the Tate-curve formula at split
  multiplicative primes, and at every other bad prime of the model a
  reduction to points with nonsingular reduction via a multiple mP.

Local heights include the (1/12) v(Delta) log p shift at primes dividing the
discriminant of the model, so they add up to hhat without a separate
discriminant term; at primes of good reduction the shift vanishes.
"""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath
import numpy as np

from .analytic import LatticeData, elliptic_log, periods
from .elliptic.curves import INFINITY, BadReduction, CurveQ, Point
from .elliptic.divpoly import psi_values
from .exact.arith import factorint, is_prime, legendre, sqrt_mod, vp

BIT_BUDGET = 1 << 30
E0_MULTIPLE_CAP = 60


class UnsupportedReductionType(ValueError):
    def __init__(self, prime: int, detail: str = ""):
        super().__init__(f"no local height routine for the prime {prime}" + (f": {detail}" if detail else ""))
        self.prime = prime


class NotSplitMultiplicative(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    pass


class CoordinateBlowup(ArithmeticError):
    pass


def _require_integral(curve: CurveQ) -> tuple[int, int]:
    if not curve.is_integral():
        raise ValueError("an integral short model is required")
    return int(curve.a), int(curve.b)


def _as_point(curve: CurveQ, P) -> Point:
    if isinstance(P, Point):
        if P.is_infinity:
            raise ValueError("the origin has no local height")
        return curve.point(P.x, P.y)
    return curve.point(*P)


def model_discriminant(curve: CurveQ) -> int:
    a, b = _require_integral(curve)
    return -16 * (4 * a**3 + 27 * b**2)


def bad_primes(curve: CurveQ) -> list[int]:
    return sorted(factorint(abs(model_discriminant(curve))))


# ---------------------------------------------------------------------------
# the doubling limit


def _logabs(n) -> float:
    n = abs(n)
    bl = n.bit_length()
    if bl <= 1000:
        return math.log(int(n)) if n else float("-inf")
    return (bl - 64) * math.log(2) + math.log(int(n >> (bl - 64)))


def _duplication_forms(a: int, b: int):
    """Phi, Psi with x(2Q) = Phi(n, d) / Psi(n, d) for x(Q) = n/d, coefficients on n^4, n^3 d, ..., d^4."""
    phi = [1, 0, -2 * a, -8 * b, a * a]
    psi = [0, 4, 0, 4 * a, 4 * b]
    return phi, psi


def _det_and_inverse(M):
    n = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    det = Fraction(1)
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det, [row[n:] for row in A]


def _form_values(coeffs, s, t):
    return sum(c * s ** (4 - i) * t**i for i, c in enumerate(coeffs))


def _arch_extremes(phi, psi, grid: int = 20001) -> tuple[float, float]:
    """Certified (lower, upper) bounds for max(|Phi|, |Psi|) on max(|s|, |t|) = 1.

    Both forms have even degree, so the two edges s = 1 and t = 1 cover the
    boundary up to sign.  A grid of spacing h misses at most L h / 2 where L
    bounds the derivative along an edge.
    """
    lo, hi = math.inf, 0.0
    r = np.linspace(-1.0, 1.0, grid)
    h = 2.0 / (grid - 1)
    for s, t in ((np.ones_like(r), r), (r, np.ones_like(r))):
        vals = np.maximum(np.abs(_form_values(phi, s, t)), np.abs(_form_values(psi, s, t)))
        L = 4 * max(sum(map(abs, phi)), sum(map(abs, psi)))
        slack = L * h / 2 + 1e-9 * L
        lo = min(lo, float(vals.min()) - slack)
        hi = max(hi, float(vals.max()) + slack)
    return lo, hi


def _max_common_valuation(f1: list[int], f2: list[int], p: int, cap: int) -> int:
    """max over z in Z_p of min(v(f1(z)), v(f2(z))), by lifting residue classes (capped)."""
    def ev(f, z):
        return sum(c * z**i for i, c in enumerate(f))

    level, classes = 0, [0]
    while classes and level < cap:
        nxt = []
        step = p**level
        for r in classes:
            for t in range(p):
                z = r + step * t
                if ev(f1, z) % (step * p) == 0 and ev(f2, z) % (step * p) == 0:
                    nxt.append(z)
        if not nxt:
            break
        classes, level = nxt, level + 1
    return level


@lru_cache(maxsize=128)
def _duplication_data(a: int, b: int) -> tuple[int, int, float]:
    """(resultant R, largest possible gcd G, bound B on |h(x(2Q)) - 4 h(x(Q))|)."""
    phi, psi = _duplication_forms(a, b)
    R, S = _resultant_and_constant(a, b)
    # gcd(Phi(n, d), Psi(n, d)) for coprime n, d divides R; bound its p-part on both affine charts
    G = 1
    for p, e in factorint(abs(R)).items():
        # chart d = 1: coefficients in n are phi reversed; chart n = 1, d in p Z_p
        a1 = list(reversed(phi))
        a2 = list(reversed(psi))
        e1 = _max_common_valuation(a1, a2, p, e)
        b1 = [c * p**i for i, c in enumerate(phi)]
        b2 = [c * p**i for i, c in enumerate(psi)]
        e2 = _max_common_valuation(b1, b2, p, e)
        G *= p ** max(e1, e2)
    lo, hi = _arch_extremes(phi, psi)
    lo = max(lo, abs(R) / S)  # the Nullstellensatz bound is always valid
    upper = min(math.log(hi), math.log(max(sum(map(abs, phi)), sum(map(abs, psi)))))
    lower = math.log(G) - math.log(lo)
    return R, G, max(abs(upper), abs(lower))


def _resultant_and_constant(a: int, b: int) -> tuple[int, int]:
    phi, psi = _duplication_forms(a, b)
    M = [[Fraction(0)] * 8 for _ in range(8)]
    for j in range(4):
        for i, c in enumerate(phi):
            M[i + j][j] += c
        for i, c in enumerate(psi):
            M[i + j][4 + j] += c
    det, inv = _det_and_inverse(M)
    S = 0
    for target in (0, 7):
        sol = [det * inv[r][target] for r in range(8)]
        assert all(s.denominator == 1 for s in sol)
        S = max(S, sum(abs(int(s)) for s in sol))
    return int(det), S


def duplication_bound(curve: CurveQ) -> float:
    """B with |h(x(2Q)) - 4 h(x(Q))| <= B for every rational point Q with 2Q != O."""
    a, b = _require_integral(curve)
    return _duplication_data(a, b)[2]


@dataclass
class LimitResult:
    value: float
    steps: int
    tail_bound: float
    torsion: bool
    history: list[float] = field(default_factory=list)


def nt_height_limit(curve: CurveQ, P, tol: float = 1e-8, bit_budget: int = BIT_BUDGET) -> LimitResult:
    """hhat(P) as h(2^k P) / 4^k with |error| <= B / (6 * 4^k) <= tol."""
    a, b = _require_integral(curve)
    if isinstance(P, Point) and P.is_infinity:
        return LimitResult(0.0, 0, 0.0, True)
    P = _as_point(curve, P)
    R, _, B = _duplication_data(a, b)
    steps = 0
    while B / (6 * 4**steps) > tol:
        steps += 1
    x = Fraction(P.x)
    n, d = gmpy2.mpz(x.numerator), gmpy2.mpz(x.denominator)
    A, Bc, Rz = gmpy2.mpz(a), gmpy2.mpz(b), gmpy2.mpz(abs(R))
    seen = {(int(n), int(d))}
    history = [max(_logabs(n), _logabs(d)) / 2]
    for k in range(1, steps + 1):
        n2, d2 = n * n, d * d
        num = n2 * n2 - 2 * A * n2 * d2 - 8 * Bc * n * d2 * d + A * A * d2 * d2
        den = 4 * d * (n2 * n + A * n * d2 + Bc * d2 * d)
        if den == 0:
            # 2^{k-1} P has order 2
            return LimitResult(0.0, k, 0.0, True, history)
        # the gcd divides R, so it is found from residues without a huge gcd
        g = gmpy2.gcd(gmpy2.gcd(num % Rz, den % Rz), Rz)
        n, d = num // g, den // g
        if d < 0:
            n, d = -n, -d
        if max(n.bit_length(), d.bit_length()) > bit_budget:
            raise CoordinateBlowup(f"coordinates exceed {bit_budget} bits at step {k}; loosen tol")
        if max(n.bit_length(), d.bit_length()) < 64:
            key = (int(n), int(d))
            if key in seen:
                return LimitResult(0.0, k, 0.0, True, history)
            seen.add(key)
        history.append(max(_logabs(n), _logabs(d)) / 2 / 4**k)
    return LimitResult(history[-1], steps, B / (6 * 4**steps), False, history)


# ---------------------------------------------------------------------------
# local heights


@dataclass
class LocalHeightTerm:
    place: str
    value: float
    weight: float = 1.0
    method: str = ""


def _b2(t):
    return t * t - t + Fraction(1, 6) if isinstance(t, Fraction) else t * t - t + 1.0 / 6


def lambda_arch_z(L: LatticeData, zhat: complex, tail: float = 1e-16) -> float:
    """The q-series local height at zhat = s + t tau (coordinates on the normalised lattice Z + tau Z)."""
    with mpmath.workdps(30):
        tau = L.tau
        t = mpmath.im(zhat) / mpmath.im(tau)
        q = L.q
        u = mpmath.exp(2j * mpmath.pi * zhat)
        val = -0.5 * _b2(t) * mpmath.log(abs(q)) - mpmath.log(abs(1 - u))
        qn = q
        n = 1
        while True:
            term = mpmath.log(abs((1 - qn * u) * (1 - qn / u)))
            val -= term
            if abs(qn / q) < tail:
                break
            qn *= q
            n += 1
        return float(val)


def _lattice(curve: CurveQ) -> LatticeData:
    return periods(curve.a, curve.b, dps=30)


def lambda_arch(curve: CurveQ, P, L: LatticeData | None = None, tail: float = 1e-16) -> float:
    """Archimedean local height of a rational (or complex) point."""
    if isinstance(P, Point) and P.is_infinity:
        raise ValueError("the origin has no local height")
    L = L or _lattice(curve)
    x, y = (P.x, P.y) if isinstance(P, Point) else P
    with mpmath.workdps(30):
        z = elliptic_log(L, x, y)
        zhat = z / L.w1
        return lambda_arch_z(L, zhat, tail)


def lambda_good(curve: CurveQ, P, p: int) -> float:
    """max(0, log|x|_p) / 2 at a prime of good reduction of the model."""
    if model_discriminant(curve) % p == 0:
        raise BadReduction(p)
    P = _as_point(curve, P)
    return _half_log_plus(P.x, p)


def _half_log_plus(x, p: int) -> float:
    """max(0, log|x|_p) / 2."""
    return 0.5 * max(0, -vp(x, p)) * math.log(p) if x != 0 else 0.0


def _log_abs_p(r, p: int) -> float:
    return -vp(r, p) * math.log(p)


def _nonsingular_reduction(curve: CurveQ, P: Point, p: int) -> bool:
    if P.x != 0 and vp(P.x, p) < 0:
        return True
    dfx = 3 * P.x * P.x + curve.a
    dfy = 2 * P.y
    return (dfx != 0 and vp(dfx, p) <= 0) or (dfy != 0 and vp(dfy, p) <= 0)


def lambda_e0_multiple(curve: CurveQ, P, p: int, cap: int = E0_MULTIPLE_CAP) -> tuple[float, int]:
    """Local height at any prime p for the given integral model.

    Uses lambda(Q) = max(0, log|x(Q)|_p)/2 + v_p(Delta) log(p)/12 for Q with
    nonsingular reduction and
    lambda(m P) = m^2 lambda(P) - log|psi_m(P)|_p + (m^2 - 1)/12 log|Delta|_p.
    Returns (value, m).
    """
    P = _as_point(curve, P)
    disc = model_discriminant(curve)
    log_disc = _log_abs_p(disc, p) if disc % p == 0 else 0.0
    Q = P
    for m in range(1, cap + 1):
        if m > 1:
            Q = curve.add(Q, P)
        if Q.is_infinity:
            raise UnsupportedReductionType(p, f"P has order {m} before reaching the nonsingular locus")
        if _nonsingular_reduction(curve, Q, p):
            lam_Q = _half_log_plus(Q.x, p) - log_disc / 12
            if m == 1:
                return lam_Q, 1
            psi_m = psi_values(curve, P.x, P.y, m)[m]
            return (lam_Q + _log_abs_p(psi_m, p) - (m * m - 1) / 12 * log_disc) / (m * m), m
    raise UnsupportedReductionType(p, f"no multiple up to {cap} has nonsingular reduction")


# ---------------------------------------------------------------------------
# Tate curve


def _j_series_inverse(M: int) -> list[int]:
    """Integer coefficients c_1..c_M of q = sum c_n J^n where J = 1/j(q) = Delta(q) / E4(q)^3."""
    n = M + 1
    # E4 = 1 + 240 sum sigma_3(k) q^k
    E4 = [1] + [240 * sum(d**3 for d in range(1, k + 1) if k % d == 0) for k in range(1, n + 1)]
    # Delta / q = prod (1 - q^k)^24
    D = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(24):
            for i in range(n, k - 1, -1):
                D[i] -= D[i - k]
    E43 = _mul_trunc(_mul_trunc(E4, E4, n), E4, n)
    # J = q * D / E4^3
    inv = _inv_trunc(E43, n)
    Jq = _mul_trunc(D, inv, n)  # J / q
    J = [0] + Jq[:n]
    # reversion: find q(J) with J(q(J)) = J
    qJ = [0, 1] + [0] * (n - 1)
    for k in range(2, n + 1):
        comp = _compose_trunc(J, qJ, k)
        qJ[k] = -comp[k]
    return qJ[: M + 1]


def _mul_trunc(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def _inv_trunc(a, n):
    out = [Fraction(1, a[0])] + [0] * n
    for k in range(1, n + 1):
        out[k] = -sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1)) / a[0]
    return [int(x) for x in out]


def _compose_trunc(f, g, n):
    out = [0] * (n + 1)
    for c in reversed(f[: n + 1]):
        out = _mul_trunc(out, g, n)
        out[0] += c
    return out


@dataclass
class TateData:
    ell: int
    v_q: int
    q: Fraction  # rational approximation, correct modulo ell^(precision)
    mu2: Fraction
    precision: int

    def to_dict(self) -> dict:
        return {"ell": self.ell, "v_q": self.v_q, "precision": self.precision}


def reduction_type(curve: CurveQ, p: int) -> str:
    """good, split, nonsplit or additive for the model at p (p >= 5); 'unknown' at 2 and 3."""
    disc = model_discriminant(curve)
    if disc % p:
        return "good"
    if p < 5:
        return "unknown"
    c4, c6 = -48 * int(curve.a), -864 * int(curve.b)
    if c4 % p == 0:
        return "additive"
    return "split" if legendre(-c6 * c4, p) == 1 else "nonsplit"


def tate_data(curve: CurveQ, ell: int, precision: int | None = None) -> TateData:
    if reduction_type(curve, ell) != "split":
        raise NotSplitMultiplicative(f"the model is not split multiplicative at {ell}")
    j = curve.j
    N = -vp(j, ell)
    precision = precision or 2 * N + 20
    M = precision // N + 2
    coeffs = _j_series_inverse(M)
    J = 1 / j
    q = sum(Fraction(c) * J**k for k, c in enumerate(coeffs) if c)
    if vp(q, ell) != N:
        raise PrecisionExhausted("Tate parameter has the wrong valuation")
    E4 = 1 + 240 * _lambert(3, q, M)
    E6 = 1 - 504 * _lambert(5, q, M)
    mu2 = -18 * curve.b * E4 / (curve.a * E6)
    return TateData(ell, N, q, mu2, precision)


def _lambert(k: int, q: Fraction, terms: int) -> Fraction:
    # sum_{n <= terms} n^k q^n / (1 - q^n), truncated
    return sum(Fraction(n**k) * q**n / (1 - q**n) for n in range(1, terms + 1))


def _solve_u_unit(x_T: Fraction, td: TateData) -> int:
    """Unit u mod ell^precision with X(u, q) = x_T, by Newton from the mod-ell quadratic."""
    ell, k = td.ell, td.precision
    mod = ell**k
    xT = x_T.numerator * pow(x_T.denominator, -1, mod) % mod
    q = td.q.numerator * pow(td.q.denominator, -1, mod) % mod
    disc = (4 * xT + 1) % ell
    r = sqrt_mod(disc, ell)
    if r is None:
        raise NotSplitMultiplicative("u is not defined over Q_ell")
    inv2x = pow(2 * xT, -1, ell) if xT % ell else None
    if inv2x is None:
        raise PrecisionExhausted("degenerate start")
    u = (2 * xT + 1 + r) * inv2x % ell
    terms = k // td.v_q + 2

    def X_and_dX(u):
        inv_u = pow(u, -1, mod)
        X = u * pow((1 - u) ** 2, -1, mod)
        dX = (1 + u) * pow((1 - u) ** 3, -1, mod)  # d/du of u/(1-u)^2
        qn = 1
        s1 = 0
        for n in range(1, terms + 1):
            qn = qn * q % mod
            w1, w2 = qn * u % mod, qn * inv_u % mod
            X += w1 * pow((1 - w1) ** 2, -1, mod) + w2 * pow((1 - w2) ** 2, -1, mod)
            s1 += qn * pow((1 - qn) ** 2, -1, mod)
            dX += qn * (1 + w1) * pow((1 - w1) ** 3, -1, mod)
            dX -= qn * inv_u * inv_u * (1 + w2) * pow((1 - w2) ** 3, -1, mod)
        return (X - 2 * s1) % mod, dX % mod

    for _ in range(2 * k.bit_length() + 4):
        X, dX = X_and_dX(u)
        G = (X - xT) % mod
        if G == 0:
            return u
        if dX % ell == 0:
            raise PrecisionExhausted("Newton derivative is not a unit")
        u = (u - G * pow(dX, -1, mod)) % mod
    if (X_and_dX(u)[0] - xT) % mod:
        raise PrecisionExhausted("Newton iteration for u did not converge")
    return u


def lambda_split_mult(curve: CurveQ, P, ell: int, precision: int | None = None) -> float:
    """Tate-curve local height -b2(log|u|/log|q|) log|q| / 2 - log|1 - u| at a split multiplicative prime."""
    P = _as_point(curve, P)
    td = tate_data(curve, ell, precision)
    N = td.v_q
    log_q = -N * math.log(ell)
    x_T = P.x / td.mu2 - Fraction(1, 12)
    if x_T == 0 or vp(x_T, ell) > 0:
        # non-identity component: v(u) = min(v(x_T), v(2Y), N/2) in (0, N)
        vx = vp(x_T, ell) if x_T != 0 else N
        vy = vp(P.y, ell) if P.y != 0 else N
        m = min(Fraction(vx), Fraction(vy), Fraction(N, 2))
        if vx >= td.precision - N:
            raise PrecisionExhausted("x_T vanishes to working precision")
        return float(-0.5 * _b2(m / N)) * log_q
    if vp(x_T, ell) < 0:
        # u = 1 + O(ell): u / (1 - u)^2 ~ x_T
        log_1mu = 0.5 * vp(x_T, ell) * math.log(ell)
    else:
        # u is a unit with u != 1 mod ell (u = 1 would make x_T non-integral), so |1 - u| = 1;
        # Newton recovers u itself unless u = -1 mod ell, where the derivative degenerates
        try:
            u = _solve_u_unit(x_T, td)
        except PrecisionExhausted:
            u = None
        if u is not None and (1 - u) % ell == 0:
            raise PrecisionExhausted("recovered u is congruent to 1")
        log_1mu = 0.0
    return -0.5 * (1 / 6) * log_q - log_1mu


# ---------------------------------------------------------------------------
# assembly


@dataclass
class NTReport:
    total: float
    terms: list[LocalHeightTerm]
    partial: dict
    method: str
    limit: float | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "total": self.total,
            "terms": [asdict(t) for t in self.terms],
            "partial": {str(k): v for k, v in self.partial.items()},
            "limit": self.limit,
        }


def _finite_places(curve: CurveQ, P: Point) -> list[int]:
    places = set(bad_primes(curve))
    places.update(factorint(Fraction(P.x).denominator))
    return sorted(places)


def local_term(curve: CurveQ, P: Point, p: int) -> LocalHeightTerm:
    if model_discriminant(curve) % p:
        return LocalHeightTerm(str(p), lambda_good(curve, P, p), 1.0, "good")
    if reduction_type(curve, p) == "split":
        return LocalHeightTerm(str(p), lambda_split_mult(curve, P, p), 1.0, "split-multiplicative")
    val, m = lambda_e0_multiple(curve, P, p)
    return LocalHeightTerm(str(p), val, 1.0, f"nonsingular-multiple m={m}")


def nt_height_local(curve: CurveQ, P, method: str = "local", tol: float = 1e-8) -> NTReport:
    """hhat(P) as a sum of local heights; method 'residual' replaces unsupported primes by limit minus the rest."""
    if method not in ("local", "residual"):
        raise ValueError("method must be 'local' or 'residual'")
    P = _as_point(curve, P)
    terms = [LocalHeightTerm("inf", lambda_arch(curve, P), 1.0, "q-series")]
    missing = []
    for p in _finite_places(curve, P):
        try:
            terms.append(local_term(curve, P, p))
        except UnsupportedReductionType:
            if method == "local":
                raise
            missing.append(p)
    limit = None
    if missing:
        limit = nt_height_limit(curve, P, tol).value
        rest = sum(t.value for t in terms)
        terms.append(LocalHeightTerm(",".join(map(str, missing)), limit - rest, 1.0, "residual"))
    total = sum(t.value * t.weight for t in terms)
    partial = {t.place: t.value for t in terms}
    return NTReport(total, terms, partial, "residual" if missing else "local-sum", limit)


def partial_height(curve: CurveQ, P, ell) -> float:
    """hhat_ell: the local height at ell ('inf' for the real place); zero at good primes not in the denominator."""
    P = _as_point(curve, P)
    if ell in ("inf", "oo", math.inf):
        return lambda_arch(curve, P)
    if not is_prime(ell):
        raise ValueError(f"{ell} is not a prime")
    return local_term(curve, P, ell).value


def nt_height(curve: CurveQ, P, method: str = "both", tol: float = 1e-8) -> NTReport:
    """Both routes side by side ('both'), or one of 'limit', 'local'."""
    if method == "limit":
        r = nt_height_limit(curve, P, tol)
        return NTReport(r.value, [], {}, "limit", r.value)
    rep = nt_height_local(curve, P, "residual")
    if method == "both" and rep.limit is None:
        rep.limit = nt_height_limit(curve, P, tol).value
    return rep


# ---------------------------------------------------------------------------
# Haar integral of the archimedean local height


@dataclass
class HaarEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int
    b2_integral: Fraction

    def to_dict(self) -> dict:
        d = asdict(self)
        d["b2_integral"] = str(self.b2_integral)
        return d


def b2_integral() -> Fraction:
    """Exact integral of t^2 - t + 1/6 over [0, 1]."""
    return Fraction(1, 3) - Fraction(1, 2) + Fraction(1, 6)


def lambda_arch_grid(L: LatticeData, s: np.ndarray, t: np.ndarray, tail: float = 1e-16) -> np.ndarray:
    """Vectorised local height at zhat = s + t tau, s, t in [0, 1)."""
    tau = complex(L.tau)
    q = complex(L.q)
    zhat = s + t * tau
    u = np.exp(2j * np.pi * zhat)
    val = -0.5 * (t * t - t + 1.0 / 6) * math.log(abs(q)) - np.log(np.abs(1 - u))
    qn = q
    while True:
        val -= np.log(np.abs((1 - qn * u) * (1 - qn / u)))
        if abs(qn) / abs(q) < tail:
            break
        qn *= q
    return val


def haar_integral_lambda(curve: CurveQ, samples: int, seed: int) -> HaarEstimate:
    """Monte Carlo mean of the local height over the fundamental parallelogram."""
    L = _lattice(curve)
    rng = np.random.default_rng(seed)
    s = rng.random(samples)
    t = rng.random(samples)
    vals = lambda_arch_grid(L, s, t)
    vals = vals[np.isfinite(vals)]
    est = float(np.sum(vals) / len(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    return HaarEstimate(est, stderr, samples, seed, b2_integral())


def seeded_points(curve: CurveQ, count: int, seed: int, x_range: int = 200) -> list[Point]:
    """Rational points with small integral x, in seeded order (used by demos and tests)."""
    pts = []
    for x in range(-x_range, x_range + 1):
        r = x**3 + curve.a * x + curve.b
        if r >= 0 and r.denominator == 1:
            s = math.isqrt(int(r))
            if s * s == r and s:
                pts.append(Point(Fraction(x), Fraction(s)))
    random.Random(seed).shuffle(pts)
    return pts[:count]


def curve_point_corpus(count: int, coeff_range: int = 12, x_range: int = 60) -> list[tuple[CurveQ, Point]]:
    """Deterministic (curve, point) pairs: one small point per curve y^2 = x^3 + a x + b, |a|, |b| <= coeff_range.

    Curves whose first point reaches no nonsingular multiple at some bad prime are
    skipped, so every pair is accepted by the pure local-sum route.
    """
    out = []
    for a in range(-coeff_range, coeff_range + 1):
        for b in range(-coeff_range, coeff_range + 1):
            if 4 * a**3 + 27 * b**2 == 0:
                continue
            curve = CurveQ(Fraction(a), Fraction(b))
            pts = seeded_points(curve, 1, 0, x_range)
            if not pts:
                continue
            try:
                for p in _finite_places(curve, pts[0]):
                    if model_discriminant(curve) % p == 0 and reduction_type(curve, p) != "split":
                        lambda_e0_multiple(curve, pts[0], p)
            except UnsupportedReductionType:
                continue
            out.append((curve, pts[0]))
            if len(out) == count:
                return out
    return out
