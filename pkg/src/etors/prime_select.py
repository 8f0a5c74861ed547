"""Supersingular prime selection: properties P1 and P2, gap constants, gap scan.

P1 at p: good reduction, a_p = 0 (supersingular for p >= 5) and a reduced
j-invariant outside {0, 1728}.

P2 at p: surjectivity of the mod-p Galois representation.  We only ever prove
it, never disprove it.  Frobenius at a good prime l != p has characteristic
polynomial x^2 - a_l x + l mod p, and a subgroup of GL2(F_p) with surjective
determinant is everything as soon as it escapes each maximal class:

    Borel                  needs an irreducible characteristic polynomial
    normaliser of split C  needs a_l != 0 with non-square discriminant
    normaliser of nonsplit needs a_l != 0 with nonzero square discriminant
    exceptional            needs u = a_l^2 / l with u not in {0, 1, 2, 4}
                           and u^2 - 3u + 1 != 0 (projective order > 5)
"""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .elliptic.curves import BadReduction, CurveQ, ap_of, count_points, reduce_mod, trace_q
from .elliptic.torsion import root_of_unity_order, sample_field_elements, torsion_field
from .exact.arith import is_prime, legendre, primes_between
from .heights import AlgebraicNumber, weil_height

DEFAULT_ELL_MAX = 10**4


class NotFoundBelowBound(LookupError):
    def __init__(self, p_max: int):
        super().__init__(f"no admissible prime p <= {p_max}")
        self.p_max = p_max


class P2Status(str, enum.Enum):
    VERIFIED = "Verified"
    INCONCLUSIVE = "Inconclusive"


CLASSES = ("borel", "split_cartan_normalizer", "nonsplit_cartan_normalizer", "exceptional")


@dataclass(frozen=True)
class P1Result:
    holds: bool
    reason: str
    a_p: int | None = None
    j_tilde: int | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass
class P2Result:
    status: P2Status
    evidence: list[dict] = field(default_factory=list)
    ell_max: int = DEFAULT_ELL_MAX

    @property
    def verified(self) -> bool:
        return self.status is P2Status.VERIFIED


@dataclass
class PrimeCertificate:
    p: int
    q: int
    a_p: int
    a_q: int
    j_tilde: int
    P1: bool
    P2: P2Status
    evidence: list[dict]

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "a_p": self.a_p, "a_q": self.a_q, "j_tilde": self.j_tilde,
                "P1": self.P1, "P2": self.P2.value, "evidence": self.evidence}


def check_P1(curve: CurveQ, p: int) -> P1Result:
    if p < 5 or not is_prime(p):
        raise ValueError(f"p = {p} must be a prime >= 5")
    try:
        Ep = reduce_mod(curve, p)
    except BadReduction:
        return P1Result(False, f"bad reduction at {p}")
    _, ap = count_points(Ep)
    j = Ep.j_tilde
    if ap != 0:
        return P1Result(False, f"ordinary: a_p = {ap}", ap, j)
    if j in (0, 1728 % p):
        return P1Result(False, f"supersingular but j~ = {j} is excluded", ap, j)
    return P1Result(True, "good supersingular reduction with j~ outside {0, 1728}", ap, j)


def _is_square_mod(x: int, p: int) -> bool:
    return legendre(x % p, p) == 1


def _witness_classes(a: int, ell: int, p: int) -> list[str]:
    a %= p
    disc = (a * a - 4 * ell) % p
    out = []
    if disc and not _is_square_mod(disc, p):
        out.append("borel")
        if a:
            out.append("split_cartan_normalizer")
    elif disc and a:
        out.append("nonsplit_cartan_normalizer")
    u = a * a * pow(ell, -1, p) % p
    if u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % p:
        out.append("exceptional")
    return out


def check_P2(curve: CurveQ, p: int, ell_max: int = DEFAULT_ELL_MAX) -> P2Result:
    """One-sided surjectivity test from Frobenius characteristic polynomials."""
    if p < 5:
        raise ValueError("p must be at least 5")
    if ell_max < 20:
        raise ValueError("ell_max must be at least 20")
    open_classes = set(CLASSES)
    evidence: list[dict] = []
    for ell in primes_between(5, ell_max):
        if ell == p:
            continue
        try:
            a = ap_of(curve, ell)
        except BadReduction:
            continue
        new = [c for c in _witness_classes(a, ell, p) if c in open_classes]
        if new:
            evidence.append({"ell": ell, "a_ell_mod_p": a % p, "rules_out": new})
            open_classes.difference_update(new)
        if not open_classes:
            return P2Result(P2Status.VERIFIED, evidence, ell_max)
    return P2Result(P2Status.INCONCLUSIVE, evidence, ell_max)


def find_admissible_prime(curve: CurveQ, p_max: int, ell_max: int = DEFAULT_ELL_MAX) -> PrimeCertificate:
    """Smallest p <= p_max satisfying P1 with P2 verified."""
    for p in primes_between(5, p_max):
        r1 = check_P1(curve, p)
        if not r1:
            continue
        r2 = check_P2(curve, p, ell_max)
        if r2.verified:
            return PrimeCertificate(p=p, q=p * p, a_p=r1.a_p, a_q=trace_q(r1.a_p, p), j_tilde=r1.j_tilde,
                                    P1=True, P2=r2.status, evidence=r2.evidence)
    raise NotFoundBelowBound(p_max)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapConstants:
    p: int
    unramified: float
    ramified: float
    error_bound: float = 1e-15

    @property
    def q(self) -> int:
        return self.p * self.p

    def Q(self, n: int) -> int:
        if n < 1:
            raise ValueError("n >= 1")
        return (self.q - 1) * self.q if n == 1 else self.q

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "unramified_bound": self.unramified, "ramified_bound": self.ramified,
                "Q(1)": self.Q(1), "Q(2)": self.Q(2), "error_bound": self.error_bound}


def gap_constants(p: int) -> GapConstants:
    """log(p/2)/(p^2 + 1) and log(p)/(2 p^8), evaluated with 30 digits then rounded."""
    if p < 5:
        raise ValueError("p must be at least 5")
    with mpmath.workdps(30):
        unram = mpmath.log(mpmath.mpf(p) / 2) / (p * p + 1)
        ram = mpmath.log(p) / (2 * mpmath.mpf(p) ** 8)
    return GapConstants(p, float(unram), float(ram))


@dataclass
class GapScanResult:
    N: int
    p: int
    bound: float
    scanned: int
    excluded_roots_of_unity: int
    min_height: float
    violations: list[dict]
    degree: int

    def to_dict(self) -> dict:
        return {"N": self.N, "p": self.p, "bound": self.bound, "field_degree": self.degree,
                "scanned": self.scanned, "excluded_roots_of_unity": self.excluded_roots_of_unity,
                "min_height": self.min_height, "violations": self.violations}


def _sample_rationals(count: int, seed: int) -> list[Fraction]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        c = Fraction(rng.randint(-12, 12), rng.randint(1, 12))
        if c:
            out.append(c)
    return out


def empirical_gap_scan(curve: CurveQ, certificate: PrimeCertificate | int, N: int, count: int,
                       seed: int, max_draws: int | None = None) -> GapScanResult:
    """Heights of `count` sampled nonzero non-root-of-unity elements of Q(E[N]).

    Roots of unity drawn by the sampler are counted and skipped; drawing
    continues until `count` admissible elements have been scanned.
    """
    p = certificate.p if isinstance(certificate, PrimeCertificate) else int(certificate)
    if math.gcd(N, p) != 1:
        raise ValueError("the unramified scan needs gcd(N, p) = 1")
    bound = gap_constants(p).unramified
    max_draws = max_draws or 4 * count + 20
    heights: list[float] = []
    violations: list[dict] = []
    excluded = 0
    if N == 1:
        degree = 1
        for c in _sample_rationals(max_draws, seed):
            if len(heights) >= count:
                break
            if abs(c) == 1:
                excluded += 1
                continue
            h = weil_height(AlgebraicNumber.rational(c)).h
            heights.append(h)
            if h < bound:
                violations.append({"element": str(c), "h": h})
    else:
        handle = torsion_field(curve, N)
        degree = handle.degree
        for e in sample_field_elements(handle, max_draws, seed):
            if len(heights) >= count:
                break
            if root_of_unity_order(handle, e) is not None:
                excluded += 1
                continue
            alpha = AlgebraicNumber.from_field_element(handle.K, e, handle.embed(e))
            h = weil_height(alpha).h
            heights.append(h)
            if h < bound:
                violations.append({"coords": [str(c) for c in e.coords], "h": h})
    return GapScanResult(N=N, p=p, bound=bound, scanned=len(heights), excluded_roots_of_unity=excluded,
                         min_height=min(heights) if heights else float("nan"), violations=violations,
                         degree=degree)
