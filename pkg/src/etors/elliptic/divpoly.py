"""Division polynomials in x for short Weierstrass curves.

We track f_n with psi_n = f_n for odd n and psi_n = 2y f_n for even n, and
R = (2y)^2 = 4(x^3 + a x + b).  The doubling recursions then read

    f_{2m+1} = R^2 f_{m+2} f_m^3 - f_{m-1} f_{m+1}^3   (m even)
    f_{2m+1} = f_{m+2} f_m^3 - R^2 f_{m-1} f_{m+1}^3   (m odd)
    f_{2m}   = f_m (f_{m+2} f_{m-1}^2 - f_{m-2} f_{m+1}^2).
"""
from __future__ import annotations

from functools import lru_cache

from ..exact import Polynomial
from ..exact.arith import divisors
from .curves import CurveQ


class DivisionIndexOutOfRange(ValueError):
    pass


@lru_cache(maxsize=256)
def _f_table(a, b, n_max: int) -> tuple[Polynomial, ...]:
    x = Polynomial.x()
    cubic = x**3 + a * x + b
    R = 4 * cubic
    R2 = R * R
    f = {
        0: Polynomial(),
        1: Polynomial([1]),
        2: Polynomial([1]),
        3: Polynomial([-a * a, 12 * b, 6 * a, 0, 3]),
        4: 2 * (x**6 + 5 * a * x**4 + 20 * b * x**3 - 5 * a * a * x**2 - 4 * a * b * x - 8 * b * b - a**3),
    }
    for n in range(5, n_max + 1):
        m = n // 2
        if n % 2:
            if m % 2 == 0:
                f[n] = R2 * f[m + 2] * f[m] ** 3 - f[m - 1] * f[m + 1] ** 3
            else:
                f[n] = f[m + 2] * f[m] ** 3 - R2 * f[m - 1] * f[m + 1] ** 3
        else:
            f[n] = f[m] * (f[m + 2] * f[m - 1] ** 2 - f[m - 2] * f[m + 1] ** 2)
    return tuple(f[i] for i in range(n_max + 1))


def f_poly(curve: CurveQ, n: int) -> Polynomial:
    """psi_n for odd n, psi_n / (2y) for even n, as a polynomial in x."""
    n = abs(n)
    return _f_table(curve.a, curve.b, max(n, 4))[n]


def psi_values(curve: CurveQ, x, y, n_max: int) -> list:
    """Values psi_0..psi_{n_max} at a point (x, y), exactly in the coordinate ring."""
    out = []
    for n in range(n_max + 1):
        v = f_poly(curve, n)(x)
        out.append(v * 2 * y if n % 2 == 0 else v)
    return out


def division_polynomial(curve: CurveQ, N: int, primitive: bool = False) -> Polynomial:
    """Polynomial whose roots are the x-coordinates of nonzero N-torsion points.

    Odd N gives psi_N (degree (N^2 - 1)/2).  Even N gives
    f_N * (x^3 + a x + b), adding the 2-torsion abscissae.  The primitive
    variant keeps only points of exact order N.
    """
    if not 2 <= N <= 12:
        raise DivisionIndexOutOfRange(f"N = {N} outside 2..12")
    full = _full(curve, N)
    if not primitive:
        return full
    out = full.monic()
    for d in divisors(N):
        if 2 <= d < N:
            g = out.gcd(_full(curve, d))
            if g.degree > 0:
                out = out.exact_div(g)
    return out.primitive() if out.degree > 0 else out


def _full(curve: CurveQ, N: int) -> Polynomial:
    fN = f_poly(curve, N)
    if N % 2:
        return fN
    x = Polynomial.x()
    return fN * (x**3 + curve.a * x + curve.b)
