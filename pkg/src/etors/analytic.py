"""Complex uniformisation of y^2 = x^3 + a x + b.

With g2 = -4a and g3 = -4b the map z -> (wp(z), wp'(z)/2) identifies C/L with
the complex points of the curve.  Periods come from the complex AGM and are
certified by rebuilding g2, g3 from the Eisenstein series E4, E6 at the
reduced modulus tau.  All series use the nome q = exp(2 pi i tau).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath


class AGMNonConvergence(ArithmeticError):
    pass


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


@dataclass(frozen=True)
class LatticeData:
    """Basis (w1, w2) of the period lattice with tau = w2 / w1 reduced."""

    a: Fraction
    b: Fraction
    w1: mpmath.mpc
    w2: mpmath.mpc
    tau: mpmath.mpc
    q: mpmath.mpc
    roots: tuple
    dps: int
    residual: float

    def to_dict(self) -> dict:
        return {
            "w1": [float(self.w1.real), float(self.w1.imag)],
            "w2": [float(self.w2.real), float(self.w2.imag)],
            "tau": [float(self.tau.real), float(self.tau.imag)],
            "abs_q": float(abs(self.q)),
            "roundtrip_residual": self.residual,
        }


def _agm(x, y):
    tol = mpmath.mpf(2) ** (-mpmath.mp.prec + 10)
    for _ in range(10 * mpmath.mp.prec):
        x1 = (x + y) / 2
        y1 = mpmath.sqrt(x * y)
        if abs(x1 - y1) > abs(x1 + y1):
            y1 = -y1
        x, y = x1, y1
        if abs(x - y) <= tol * abs(x):
            return x
    raise AGMNonConvergence("AGM iteration did not converge")


def reduce_basis(w1, w2):
    """Change basis so that tau = w2/w1 lies in the standard fundamental domain."""
    if mpmath.im(w2 / w1) < 0:
        w2 = -w2
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec // 2)
    for _ in range(1000):
        tau = w2 / w1
        n = mpmath.nint(mpmath.re(tau))
        if n:
            w2 = w2 - n * w1
            tau = w2 / w1
        if abs(tau) < 1 - eps:
            w1, w2 = -w2, w1
            continue
        break
    # edge conventions: Re tau in [-1/2, 1/2)
    if mpmath.re(w2 / w1) >= mpmath.mpf(1) / 2 - eps:
        w2 = w2 - w1
    return w1, w2


def eisenstein_e4_e6(q):
    s4 = mpmath.mpc(0)
    s6 = mpmath.mpc(0)
    qn = q
    k = 1
    tol = mpmath.mpf(2) ** (-mpmath.mp.prec - 10)
    while abs(qn) * k**5 > tol:
        t = qn / (1 - qn)
        s4 += k**3 * t
        s6 += k**5 * t
        k += 1
        qn *= q
    return 1 + 240 * s4, 1 - 504 * s6


def periods(a, b, dps: int = 30) -> LatticeData:
    """Period lattice of y^2 = x^3 + a x + b with round-trip certification."""
    a, b = Fraction(a), Fraction(b)
    if 4 * a**3 + 27 * b**2 == 0:
        raise ValueError("singular curve")
    with mpmath.workdps(dps + 15):
        A, B = _mp(a), _mp(b)
        roots = mpmath.polyroots([1, 0, A, B], maxsteps=400, extraprec=4 * dps + 60)
        g2, g3 = -4 * A, -4 * B
        scale = max(1, abs(g2), abs(g3))
        best = None
        for e1, e2, e3 in itertools.permutations(roots):
            x = mpmath.sqrt(e1 - e3)
            y = mpmath.sqrt(e1 - e2)
            z = mpmath.sqrt(e2 - e3)
            if abs(x - y) > abs(x + y):
                y = -y
            if abs(x - z) > abs(x + z):
                z = -z
            w1 = mpmath.pi / _agm(x, y)
            w2 = mpmath.pi * 1j / _agm(x, z)
            if abs(mpmath.im(w2 / w1)) < mpmath.mpf(10) ** (-dps // 2):
                continue
            w1, w2 = reduce_basis(w1, w2)
            tau = w2 / w1
            q = mpmath.exp(2j * mpmath.pi * tau)
            E4, E6 = eisenstein_e4_e6(q)
            G2 = 4 * mpmath.pi**4 / 3 * E4 / w1**4
            G3 = 8 * mpmath.pi**6 / 27 * E6 / w1**6
            res = max(abs(G2 - g2), abs(G3 - g3)) / scale
            if best is None or res < best[0]:
                best = (res, w1, w2, tau, q)
            if res < mpmath.mpf(10) ** (-dps + 3):
                break
        if best is None or best[0] > mpmath.mpf(10) ** (-10):
            raise AGMNonConvergence("period round-trip check failed")
        res, w1, w2, tau, q = best
        # order the roots by the real part for reproducibility
        roots = tuple(sorted(roots, key=lambda r: (float(mpmath.re(r)), float(mpmath.im(r)))))
        return LatticeData(a, b, +w1, +w2, +tau, +q, roots, dps, float(res))


# ---------------------------------------------------------------------------
# Weierstrass functions on the reduced lattice


def _series_tol():
    return mpmath.mpf(2) ** (-mpmath.mp.prec - 10)


def reduce_z(L: LatticeData, z):
    """Return z' = z mod L with zhat = z'/w1 = s + t tau, 0 <= s, t < 1."""
    zh = z / L.w1
    t = mpmath.floor(mpmath.im(zh) / mpmath.im(L.tau))
    zh = zh - t * L.tau
    s = mpmath.floor(mpmath.re(zh))
    zh = zh - s
    return zh * L.w1


def _x_series(u, q):
    """X(u, q) = sum_{n in Z} q^n u / (1 - q^n u)^2 - 2 sum_{n>=1} q^n / (1 - q^n)^2."""
    s = u / (1 - u) ** 2
    qn = q
    tol = _series_tol()
    while abs(qn) > tol:
        w1 = qn * u
        w2 = qn / u
        s += w1 / (1 - w1) ** 2 + w2 / (1 - w2) ** 2 - 2 * qn / (1 - qn) ** 2
        qn *= q
    return s


def _dx_series(u, q):
    """u dX/du as a bilateral series."""
    s = u * (1 + u) / (1 - u) ** 3
    qn = q
    tol = _series_tol()
    while abs(qn) > tol:
        w1 = qn * u
        w2 = qn / u
        s += w1 * (1 + w1) / (1 - w1) ** 3 - w2 * (1 + w2) / (1 - w2) ** 3
        qn *= q
    return s


def wp(L: LatticeData, z):
    z = reduce_z(L, z)
    c = 2j * mpmath.pi / L.w1
    u = mpmath.exp(c * z)
    return c**2 * (mpmath.mpf(1) / 12 + _x_series(u, L.q))


def wp_prime(L: LatticeData, z):
    z = reduce_z(L, z)
    c = 2j * mpmath.pi / L.w1
    u = mpmath.exp(c * z)
    return c**3 * _dx_series(u, L.q)


def point_from_z(L: LatticeData, z):
    """Complex point (x, y) = (wp(z), wp'(z)/2)."""
    return wp(L, z), wp_prime(L, z) / 2


def elliptic_log(L: LatticeData, x, y, polish: bool = True):
    """z with (wp(z), wp'(z)/2) = (x, y), via Carlson's R_F plus Newton polishing."""
    x, y = _mp(x), _mp(y)
    e1, e2, e3 = L.roots
    z = mpmath.elliprf(x - e1, x - e2, x - e3)
    if abs(wp_prime(L, z) / 2 + y) < abs(wp_prime(L, z) / 2 - y):
        z = -z
    if polish:
        res = abs(wp(L, z) - x)
        for _ in range(6):
            d = wp_prime(L, z)
            if d == 0:
                break
            cand = z - (wp(L, z) - x) / d
            cres = abs(wp(L, cand) - x)
            if not cres < res:
                break
            z, res = cand, cres
    if abs(wp(L, z) - x) > mpmath.mpf(10) ** (-mpmath.mp.dps // 2) * max(1, abs(x)) or \
            abs(wp_prime(L, z) / 2 - y) > mpmath.mpf(10) ** (-mpmath.mp.dps // 2) * max(1, abs(y)):
        raise ArithmeticError("elliptic logarithm failed to reproduce the point")
    return reduce_z(L, z)


def complex_conjugation_matrix(L: LatticeData) -> tuple[int, int, int, int]:
    """Integer matrix of z -> conj(z) on the basis (w1, w2), column convention.

    conj(w1) = m11 w1 + m21 w2 and conj(w2) = m12 w1 + m22 w2.
    """
    def coords(w):
        # solve w = s w1 + t w2 over the reals
        t = mpmath.im(w / L.w1) / mpmath.im(L.tau)
        s = mpmath.re(w / L.w1 - t * L.tau)
        return int(mpmath.nint(s)), int(mpmath.nint(t))

    s1, t1 = coords(mpmath.conj(L.w1))
    s2, t2 = coords(mpmath.conj(L.w2))
    return s1, s2, t1, t2
