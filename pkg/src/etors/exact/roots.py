"""Certified complex roots of rational polynomials.

Roots are approximated with Aberth iterations in mpmath and then enclosed
with the Weierstrass-correction inclusion theorem: for a square-free f of
degree n with approximations z_1..z_n and corrections

    W_i = f(z_i) / (lc * prod_{j != i} (z_i - z_j)),

every root of f lies in the union of the disks D(z_i, n |W_i|), and a
connected component made of k disks holds exactly k roots.  When all disks
are pairwise disjoint each holds exactly one root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .poly import Polynomial


class RootPrecisionError(ArithmeticError):
    """Raised when certification fails after the allowed refinement rounds."""


@dataclass(frozen=True)
class ComplexBall:
    mid: mpmath.mpc
    radius: float

    @property
    def center(self) -> complex:
        return complex(self.mid)

    def contains(self, z) -> bool:
        return abs(mpmath.mpc(z) - self.mid) <= self.radius

    def overlaps(self, other: "ComplexBall") -> bool:
        return abs(self.mid - other.mid) <= self.radius + other.radius

    def __repr__(self) -> str:
        c = self.center
        return f"ComplexBall({c.real:.15g}{c.imag:+.15g}j, r={self.radius:.2e})"


def _horner(coeffs: Sequence[int], z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _horner_with_derivative(coeffs: Sequence[int], z):
    p = mpmath.mpc(0)
    dp = mpmath.mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_guesses(coeffs: Sequence[int]) -> list[complex]:
    n = len(coeffs) - 1
    lc = coeffs[-1]
    # Cauchy-type radius for the fallback circle
    rad = 1 + max(abs(mpmath.mpf(c) / lc) for c in coeffs[:-1])
    try:
        scale = max(abs(c) for c in coeffs)
        fl = np.array([float(mpmath.mpf(c) / scale) for c in reversed(coeffs)])
        if np.all(np.isfinite(fl)) and fl[0] != 0:
            r = np.roots(fl)
            if len(r) == n and np.all(np.isfinite(r)):
                return [complex(z) for z in r]
    except (OverflowError, ValueError, np.linalg.LinAlgError):
        pass
    rad = float(min(rad, mpmath.mpf(10) ** 300))
    return [rad * complex(math.cos(2 * math.pi * k / n + 0.4), math.sin(2 * math.pi * k / n + 0.4))
            for k in range(n)]


def _aberth(coeffs, zs, tol, max_iter=400):
    n = len(zs)
    for _ in range(max_iter):
        worst = mpmath.mpf(0)
        new = list(zs)
        for i in range(n):
            p, dp = _horner_with_derivative(coeffs, new[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else mpmath.mpc(tol)
            s = mpmath.mpc(0)
            zi = new[i]
            for j in range(n):
                if j != i:
                    d = zi - new[j]
                    if d != 0:
                        s += 1 / d
            denom = 1 - ratio * s
            step = ratio / denom if denom != 0 else ratio
            new[i] = zi - step
            rel = abs(step) / max(1, abs(new[i]))
            if rel > worst:
                worst = rel
        zs = new
        if worst < tol:
            break
    return zs


def _certify(coeffs, zs):
    n = len(zs)
    lc = coeffs[-1]
    balls = []
    for i in range(n):
        prod = mpmath.mpc(lc)
        for j in range(n):
            if j != i:
                prod *= zs[i] - zs[j]
        if prod == 0:
            return None
        w = _horner(coeffs, zs[i]) / prod
        # slack for rounding in the evaluation itself
        r = n * abs(w) * (1 + mpmath.mpf(2) ** -20) + abs(zs[i]) * mpmath.mpf(2) ** (-mpmath.mp.prec + 8)
        balls.append(ComplexBall(zs[i], float(r) if r > 0 else 0.0))
    return balls


def _pairwise_disjoint(balls: list[ComplexBall]) -> bool:
    if len(balls) < 2:
        return True
    mids = np.array([b.center for b in balls])
    rads = np.array([b.radius for b in balls])
    d = np.abs(mids[:, None] - mids[None, :])
    np.fill_diagonal(d, np.inf)
    if np.all(d > (rads[:, None] + rads[None, :]) * (1 + 1e-9) + 1e-300):
        return True
    # tight cases: confirm in high precision
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            if d[i, j] <= (rads[i] + rads[j]) * 2 and balls[i].overlaps(balls[j]):
                return False
    return True


def squarefree_roots(f: Polynomial, eps: float = 1e-12, hints=None, max_rounds: int = 6,
                     dps: int | None = None) -> list[ComplexBall]:
    """Certified disjoint balls for the roots of a square-free polynomial."""
    coeffs = f.primitive().int_coeffs()
    n = len(coeffs) - 1
    if n < 1:
        return []
    size_digits = max(len(str(abs(c))) for c in coeffs)
    work = dps or max(30, int(-math.log10(eps)) + 15, size_digits // 2 + 20)
    if n == 1:
        with mpmath.workdps(work):
            z = mpmath.mpc(mpmath.mpf(-coeffs[0]) / coeffs[1])
            exact = (z.real * coeffs[1] == -coeffs[0])
            r = 0.0 if exact else float(abs(z) * mpmath.mpf(2) ** (-mpmath.mp.prec + 2))
        return [ComplexBall(z, r)]
    use_hints = hints is not None and len(hints) == n
    guesses = list(hints) if use_hints else _initial_guesses(coeffs)
    if use_hints:
        # accurate hints often certify as they stand, which skips the iteration
        with mpmath.workdps(work):
            balls = _certify(coeffs, [mpmath.mpc(z) for z in guesses])
            if balls is not None and all(b.radius <= eps for b in balls) and _pairwise_disjoint(balls):
                return balls
    for _ in range(max_rounds):
        with mpmath.workdps(work):
            zs = [mpmath.mpc(z) for z in guesses]
            zs = _aberth(coeffs, zs, mpmath.mpf(10) ** (-(work - 5)))
            balls = _certify(coeffs, zs)
            if balls is not None and all(b.radius <= eps for b in balls) and _pairwise_disjoint(balls):
                return balls
            guesses = zs
        work *= 2
    raise RootPrecisionError(f"root certification failed for degree {n} after {max_rounds} rounds")


def complex_roots(f: Polynomial, eps: float = 1e-12, hints=None) -> list[tuple[ComplexBall, int]]:
    """All roots of f with multiplicities, each enclosed in a ball of radius <= eps."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    out: list[tuple[ComplexBall, int]] = []
    parts = f.squarefree_decomposition() if not f.is_squarefree() else [(f.monic(), 1)]
    for part, mult in parts:
        part_hints = hints if (hints is not None and len(parts) == 1) else None
        for ball in squarefree_roots(part, eps, part_hints):
            out.append((ball, mult))
    if len(parts) > 1 and not _pairwise_disjoint([b for b, _ in out]):
        raise RootPrecisionError("balls of distinct square-free parts overlap")
    return out
