"""Equidistribution on the unit circle and on E(C), numerically.

f_m(z) = min(m, max(-m, log|z - 1|)) is the bounded stand-in for log|z - 1|.
On the circle the upper clip never bites (|z - 1| <= 2 < e^m), so only the
arc around z = 1 where 2 sin(pi s) < e^(-m) is clipped.  There f_m = -m lies
above log|z - 1|, whose circle integral is 0, so the integral of f_m is
positive and decreases to 0 as m grows.  It has a closed form through the
Clausen function, used as the oracle for quadrature.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .analytic import elliptic_log, periods, point_from_z
from .elliptic.curves import CurveQ, Point
from .exact.poly import Polynomial
from .heights import AlgebraicNumber, height, is_root_of_unity


class NonConvergentQuadrature(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# the truncated logarithm


def f_m_eval(z, m: int) -> float:
    """Accepts Python or mpmath complex numbers."""
    if z == 0:
        raise ValueError("f_m is defined on C minus 0")
    if z == 1:
        return float(-m)
    return min(float(m), max(float(-m), float(mpmath.log(abs(z - 1)))))


def f_m_values(z: np.ndarray, m: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("f_m is defined on C minus 0")
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(z - 1))
    return np.clip(logs, -m, m)


def clip_arc(m: int) -> float:
    """s_m in (0, 1/2] with 2 sin(pi s_m) = e^(-m): f_m is clipped on [0, s_m] and [1 - s_m, 1]."""
    r = math.exp(-m)
    return math.asin(min(1.0, r / 2)) / math.pi


def f_m_circle_integral_exact(m: int) -> float:
    """Closed form -2 m s_m + Cl_2(2 pi s_m) / pi of the circle integral of f_m."""
    with mpmath.workdps(30):
        s = mpmath.asin(mpmath.exp(-m) / 2) / mpmath.pi
        return float(-2 * m * s + mpmath.clsin(2, 2 * mpmath.pi * s) / mpmath.pi)


@dataclass
class CircleIntegral:
    value: float
    error: float


def circle_integral(f: Callable[[complex], float], tol: float = 1e-8, breakpoints=()) -> CircleIntegral:
    """Integral of f(e^{2 pi i s}) over s in [0, 1].

    The interval is split at the given breakpoints and geometrically towards
    s = 0 and s = 1, where f_m and log|z - 1| are singular or kinked; each
    piece goes to tanh-sinh quadrature with its error estimate.
    """
    pts = {0.0, 0.5, 1.0}
    for k in range(1, 40):
        pts.add(2.0**-k)
        pts.add(1 - 2.0**-k)
    pts.update(float(b) for b in breakpoints if 0 < b < 1)
    pts = sorted(pts)
    total, err = mpmath.mpf(0), mpmath.mpf(0)
    with mpmath.workdps(20):

        def g(s):
            z = mpmath.expjpi(2 * s)
            # nodes can round onto s = 0 or 1; a single point carries no mass
            return mpmath.mpf(0) if z == 1 else f(z)

        for a, b in zip(pts, pts[1:]):
            v, e = mpmath.quad(g, [a, b], error=True, maxdegree=8)
            total += v
            err += e
    if err > tol:
        raise NonConvergentQuadrature(f"estimated error {float(err):.2e} exceeds {tol:.1e}")
    return CircleIntegral(float(total), float(err))


def log_abs_minus_one(z):
    return mpmath.log(abs(z - 1)) if z != 1 else -mpmath.inf


def f_m_circle_integral(m: int, tol: float = 1e-8) -> CircleIntegral:
    s = clip_arc(m)
    return circle_integral(lambda z: f_m_eval(z, m), tol, breakpoints=(s, 1 - s))


# ---------------------------------------------------------------------------
# choosing m


@dataclass
class TruncationParams:
    m: int
    c: float
    integral: float
    log_term: float

    def satisfied(self) -> bool:
        return self.integral < self.c / 2 and self.log_term <= self.c / 2

    def to_dict(self) -> dict:
        d = asdict(self)
        d["conditions_hold"] = self.satisfied()
        return d


def choose_m(c: float, m_max: int = 200) -> TruncationParams:
    """Least m >= 1 with int f_m < c/2 and log(1 + 2 e^-m) <= c/2."""
    if not c > 0:
        raise ValueError("c must be positive")
    for m in range(1, m_max + 1):
        log_term = math.log1p(2 * math.exp(-m))
        if log_term > c / 2:
            continue
        integral = f_m_circle_integral_exact(m)
        if integral < c / 2:
            params = TruncationParams(m, c, integral, log_term)
            assert params.satisfied()
            return params
    raise ValueError(f"no m <= {m_max} satisfies both conditions")  # pragma: no cover


# ---------------------------------------------------------------------------
# Bilu discrepancy


@dataclass
class DiscrepancyReport:
    subject: str
    average: float
    integral: float
    discrepancy: float
    count: int
    height: float | None = None
    applicable: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def bilu_discrepancy(alpha: AlgebraicNumber | Polynomial | str, m: int) -> DiscrepancyReport:
    """|average of f_m over the conjugates - circle integral of f_m|."""
    if not isinstance(alpha, AlgebraicNumber):
        alpha = AlgebraicNumber.from_minpoly(alpha)
    subject = str(alpha.minpoly)
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    integral = f_m_circle_integral_exact(m)
    conj = np.array([b.center for b in alpha.conjugates()])
    avg = float(np.mean(f_m_values(conj, m)))
    order = is_root_of_unity(alpha)
    if order is not None:
        return DiscrepancyReport(subject, avg, integral, abs(avg - integral), len(conj), 0.0, False,
                                 f"root of unity of order {order}; Bilu equidistribution excludes roots of unity")
    return DiscrepancyReport(subject, avg, integral, abs(avg - integral), len(conj), height(alpha))


# ---------------------------------------------------------------------------
# division points on E(C)


@dataclass
class FiberReport:
    k: int
    points: int
    bins: int
    chi_square: float
    histogram: list[list[int]] = field(repr=False)
    check_residual: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def csv(self) -> str:
        return "\n".join(",".join(str(c) for c in row) for row in self.histogram) + "\n"


def _grid_side(bins: int) -> int:
    side = math.isqrt(bins)
    if side * side != bins:
        raise ValueError("bins must be a perfect square (side x side grid on the fundamental domain)")
    return side


def _double_complex(a, P):
    x, y = P
    lam = (3 * x * x + a) / (2 * y)
    x2 = lam * lam - 2 * x
    return x2, lam * (x - x2) - y


def suz_fiber_demo(curve: CurveQ, P0, k_max: int, bins: int) -> list[FiberReport]:
    """Chi-square distance to the uniform histogram for the 4^k points P with [2^k] P = P0."""
    if k_max > 8:
        raise ValueError("k_max <= 8")
    side = _grid_side(bins)
    P0 = P0 if isinstance(P0, Point) else curve.point(*P0)
    if P0.is_infinity:
        raise ValueError("P0 must be a non-torsion point")
    L = periods(curve.a, curve.b, dps=30)
    with mpmath.workdps(30):
        z0 = elliptic_log(L, P0.x, P0.y) / L.w1
        t0 = float(mpmath.im(z0) / mpmath.im(L.tau))
        s0 = float(mpmath.re(z0) - t0 * mpmath.re(L.tau))
    out = []
    for k in range(k_max + 1):
        n = 2**k
        idx = np.arange(n)
        s = (s0 + idx) / n
        t = (t0 + idx) / n
        hs = np.minimum((s * side).astype(int), side - 1)
        ht = np.minimum((t * side).astype(int), side - 1)
        hist = np.zeros((side, side), dtype=np.int64)
        # every pair (i, j) is one division point, so the histogram is an outer product
        np.add.at(hist, (hs[:, None].repeat(n, 1), ht[None, :].repeat(n, 0)), 1)
        freq = hist / (n * n)
        chi = float(np.sum((freq - 1 / bins) ** 2) * bins)
        residual = None
        if k >= 1:
            # one division point, doubled k times, must land back on P0
            with mpmath.workdps(30):
                z = (mpmath.mpf(s[0]) + mpmath.mpf(t[0]) * L.tau) * L.w1
                Q = point_from_z(L, z)
                for _ in range(k):
                    Q = _double_complex(mpmath.mpf(curve.a.numerator) / curve.a.denominator, Q)
                residual = float(abs(Q[0] - P0.x) / max(1, abs(P0.x)))
        out.append(FiberReport(k, n * n, bins, chi, hist.tolist(), residual))
    return out
