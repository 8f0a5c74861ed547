"""Exact construction of the N-torsion field Q(E[N]) for small N.

The field is built from the complex uniformisation rather than by adjoining
roots one at a time:

* the points of E[N] are wp((s w1 + t w2)/N) for (s, t) in (Z/N)^2, and the
  scaled coordinates X = N x, Y = N^2 y are algebraic integers;
* a primitive element theta is a small integer combination of the scaled
  coordinates of P1 = w1/N, P2 = w2/N and P1 + P2; a Galois element acting on
  E[N] by the matrix M (columns are the images of P1 and P2) sends theta to
  theta_M, the same combination evaluated at M P1, M P2, M (P1 + P2);
* the image of Galois is the smallest subgroup G of GL2(Z/N) containing the
  matrix of complex conjugation for which prod_{M in G} (x - theta_M) has
  integer coefficients;
* any element alpha with known conjugates alpha_M is recovered exactly as
  P(theta)/g'(theta) with P(x) = sum_M alpha_M g(x)/(x - theta_M).

Every claim is then re-checked in exact arithmetic: irreducibility of g, all
N^2 - 1 nonzero torsion points on the curve and annihilated by the division
polynomial, the addition P1 + P2, and Phi_N(zeta) = 0 for the Weil-pairing
root of unity.
"""
from __future__ import annotations

import heapq
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from ..analytic import complex_conjugation_matrix, periods, wp, wp_prime
from ..exact import NFElement, NumberField, Polynomial, cyclotomic, is_irreducible
from ..exact.factor import DegreeCapExceeded
from .curves import CurveQ
from .divpoly import division_polynomial

DEFAULT_DEGREE_CAP = 48


class TorsionFieldError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# GL2(Z/N) as integer codes with a multiplication table


@lru_cache(maxsize=8)
def gl2_table(N: int):
    """(elements as (m11, m12, m21, m22) array, code->index map, product table)."""
    vals = np.array(list(itertools.product(range(N), repeat=4)), dtype=np.int64)
    det = (vals[:, 0] * vals[:, 3] - vals[:, 1] * vals[:, 2]) % N
    units = np.array([math.gcd(int(d), N) == 1 for d in det])
    els = vals[units]
    codes = ((els[:, 0] * N + els[:, 1]) * N + els[:, 2]) * N + els[:, 3]
    index = -np.ones(N**4, dtype=np.int64)
    index[codes] = np.arange(len(els))
    a, b, c, d = (els[:, i][:, None] for i in range(4))
    e, f, g, h = (els[:, i][None, :] for i in range(4))
    p11 = (a * e + b * g) % N
    p12 = (a * f + b * h) % N
    p21 = (c * e + d * g) % N
    p22 = (c * f + d * h) % N
    table = index[((p11 * N + p12) * N + p21) * N + p22]
    return els, index, table


def _code(m, N):
    return ((m[0] % N * N + m[1] % N) * N + m[2] % N) * N + m[3] % N


def closure(gens: list[int], table: np.ndarray, identity: int) -> frozenset[int]:
    elems = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


# ---------------------------------------------------------------------------


@dataclass
class TorsionFieldHandle:
    curve: CurveQ
    N: int
    K: NumberField
    theta_combo: tuple[int, ...]
    galois: list[tuple[int, int, int, int]]
    generators: list[tuple[NFElement, NFElement]]
    points: dict[tuple[int, int], tuple[NFElement, NFElement]]
    zeta: NFElement
    theta_conjugates: list = field(repr=False, default_factory=list)
    dps: int = 60

    @property
    def degree(self) -> int:
        return self.K.d

    def embed(self, e: NFElement) -> list:
        with mpmath.workdps(self.dps):
            return e.embed(self.theta_conjugates)

    def summary(self) -> dict:
        return {"N": self.N, "degree": self.K.d, "galois_order": len(self.galois),
                "defining_polynomial_degree": self.K.g.degree,
                "zeta_check": "Phi_N(zeta) = 0 verified exactly"}


def _scaled_point_table(L, N: int):
    """{(s, t): (X, Y)} for the nonzero N-torsion with X = N x and Y = N^2 y."""
    out = {}
    for s in range(N):
        for t in range(N):
            if s == 0 and t == 0:
                continue
            z = (s * L.w1 + t * L.w2) / N
            x = wp(L, z)
            y = wp_prime(L, z) / 2
            out[(s, t)] = (N * x, N * N * y)
    return out


def _act(m, v, N):
    """Matrix m = (m11, m12, m21, m22) acting on the column vector v."""
    return ((m[0] * v[0] + m[1] * v[1]) % N, (m[2] * v[0] + m[3] * v[1]) % N)


_BASE_VECTORS = ((1, 0), (0, 1), (1, 1))


def _theta_value(table, m, combo, N):
    """combo = (cX1, cX2, cX3, cY1, cY2, cY3) over the vectors M e1, M e2, M (e1 + e2)."""
    acc = mpmath.mpc(0)
    for i, v in enumerate(_BASE_VECTORS):
        X, Y = table[_act(m, v, N)]
        acc += combo[i] * X + combo[3 + i] * Y
    return acc


def _combos():
    yield (1, 0, 0, 0, 0, 0)
    yield (1, 2, 0, 0, 0, 0)
    yield (1, 2, 0, 1, 0, 0)
    yield (1, 2, 0, 1, 3, 0)
    rng = random.Random(2718)
    while True:
        yield tuple(rng.randint(-3, 3) for _ in range(6))


def _poly_from_roots_mp(roots):
    coeffs = [mpmath.mpc(1)]
    for r in roots:
        new = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] -= r * c
        coeffs = new
    return coeffs  # ascending


def _round_integral(coeffs, tol) -> list[int] | None:
    out = []
    for c in coeffs:
        r = mpmath.nint(c.real)
        if abs(c.imag) > tol or abs(c.real - r) > tol:
            return None
        out.append(int(r))
    return out


def torsion_field(curve: CurveQ, N: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> TorsionFieldHandle:
    if N not in (2, 3, 4, 5):
        raise ValueError("torsion fields are supported for N in {2, 3, 4, 5}")
    if not curve.is_integral():
        raise ValueError("integral model required")
    els, index, table = gl2_table(N)
    identity = int(index[_code((1, 0, 0, 1), N)])
    all_m = [tuple(int(v) for v in row) for row in els]

    # a coarse pass sizes the working precision
    with mpmath.workdps(30):
        L0 = periods(curve.a, curve.b, dps=30)
        pts0 = _scaled_point_table(L0, N)
        mag = max(abs(X) + abs(Y) for X, Y in pts0.values())
    est_digits = int(min(degree_cap, len(all_m)) * float(mpmath.log10(1 + 20 * mag))) + 1
    dps = max(60, est_digits + 40)

    with mpmath.workdps(dps):
        L = periods(curve.a, curve.b, dps=dps)
        pts = _scaled_point_table(L, N)
        conj = complex_conjugation_matrix(L)
        c_idx = int(index[_code(conj, N)])
        tol = mpmath.mpf(10) ** (-(dps - est_digits) // 2)

        # primitive element: theta_M pairwise distinct over the whole of GL2(Z/N)
        for combo in itertools.islice(_combos(), 200):
            thetas = [_theta_value(pts, m, combo, N) for m in all_m]
            approx = np.array([complex(t) for t in thetas])
            gaps = np.abs(approx[:, None] - approx[None, :])
            np.fill_diagonal(gaps, np.inf)
            if gaps.min() > 1e-6 * max(1.0, float(np.abs(approx).max())):
                break
        else:
            raise TorsionFieldError("no separating primitive element found")

        # smallest subgroup containing complex conjugation with integral product
        cyclics = sorted({closure([i], table, identity) for i in range(len(all_m))}, key=len)
        start = closure([c_idx], table, identity)
        seen = {start}
        heap = [(len(start), sorted(start), start)]
        found = None
        while heap:
            size, _, H = heapq.heappop(heap)
            ints = _round_integral(_poly_from_roots_mp([thetas[i] for i in sorted(H)]), tol)
            if ints is not None:
                found = (H, ints)
                break
            for C in cyclics:
                if C <= H:
                    continue
                J = closure(sorted(H | C), table, identity)
                if len(J) <= degree_cap and J not in seen:
                    seen.add(J)
                    heapq.heappush(heap, (len(J), sorted(J), J))
        if found is None:
            raise DegreeCapExceeded(f"Q(E[{N}]) has degree above the cap {degree_cap}")
        G, gcoeffs = found
        G_list = sorted(G)
        theta_conj = [thetas[i] for i in G_list]
        g = Polynomial(gcoeffs)

    if not is_irreducible(g):
        raise TorsionFieldError("defining polynomial of the torsion field is reducible")
    K = NumberField(g, check=False)
    K.set_embeddings(theta_conj, dps)
    handle = _express_and_verify(curve, N, K, g, combo, [all_m[i] for i in G_list], theta_conj, pts, dps, tol)
    return handle


def _express(K, g, values, theta_conj, gprime_inv, tol) -> NFElement:
    """alpha = P(theta) / g'(theta) with P(x) = sum_M alpha_M g(x) / (x - theta_M)."""
    n = len(theta_conj)
    gm = [mpmath.mpc(c) for c in g.int_coeffs()]
    acc = [mpmath.mpc(0)] * n
    for val, th in zip(values, theta_conj):
        # synthetic division of g by (x - th)
        q = [mpmath.mpc(0)] * n
        q[n - 1] = gm[n]
        for i in range(n - 1, 0, -1):
            q[i - 1] = gm[i] + th * q[i]
        for i in range(n):
            acc[i] += val * q[i]
    ints = _round_integral(acc, tol)
    if ints is None:
        raise TorsionFieldError("Lagrange numerator is not integral; precision too low")
    return K(ints) * gprime_inv


def _express_and_verify(curve, N, K, g, combo, G, theta_conj, pts, dps, tol) -> TorsionFieldHandle:
    a, b = curve.a, curve.b
    with mpmath.workdps(dps):
        gprime = K(g.derivative())
        gprime_inv = gprime.inverse()
        vectors = sorted(pts)
        points: dict[tuple[int, int], tuple[NFElement, NFElement]] = {}
        for v in vectors:
            Xs = [pts[_act(m, v, N)][0] for m in G]
            Ys = [pts[_act(m, v, N)][1] for m in G]
            X = _express(K, g, Xs, theta_conj, gprime_inv, tol)
            Y = _express(K, g, Ys, theta_conj, gprime_inv, tol)
            points[v] = (X / N, Y / (N * N))
        # Weil pairing values: sigma_M(zeta) = zeta^det(M)
        zeta0 = mpmath.expj(2 * mpmath.pi / N)
        zvals = [zeta0 ** ((m[0] * m[3] - m[1] * m[2]) % N) for m in G]
        zeta = _express(K, g, zvals, theta_conj, gprime_inv, tol)

    # exact verification ----------------------------------------------------
    divp = division_polynomial(curve, N)
    seen = set()
    for v, (x, y) in points.items():
        if not (y * y - (x * x * x + x * a + b)).is_zero():
            raise TorsionFieldError(f"torsion point {v} is not on the curve")
        if not divp.eval_with(x, K).is_zero():
            raise TorsionFieldError(f"torsion point {v} is not annihilated by the division polynomial")
        seen.add((x.num, x.den, y.num, y.den))
    if len(seen) != N * N - 1:
        raise TorsionFieldError("torsion points are not pairwise distinct")
    theta = K.zero()
    for i, v in enumerate(_BASE_VECTORS):
        x, y = points[v]
        theta = theta + x * (combo[i] * N) + y * (combo[3 + i] * N * N)
    if theta != K.gen():
        raise TorsionFieldError("primitive element does not match its defining combination")
    _check_sum(points[(1, 0)], points[(0, 1)], points[(1, 1)])
    if not cyclotomic(N).eval_with(zeta, K).is_zero():
        raise TorsionFieldError("Weil-pairing root of unity fails Phi_N(zeta) = 0")
    return TorsionFieldHandle(curve=curve, N=N, K=K, theta_combo=tuple(combo), galois=list(G),
                              generators=[points[(1, 0)], points[(0, 1)]], points=points, zeta=zeta,
                              theta_conjugates=list(theta_conj), dps=dps)


def _check_sum(P, Q, S):
    """Check P + Q = S without inverting x_Q - x_P."""
    (x1, y1), (x2, y2), (x3, y3) = P, Q, S
    d = x2 - x1
    n = y2 - y1
    if d.is_zero():
        if not (y1 + y2).is_zero():
            raise TorsionFieldError("generators are not independent")
        return
    d2 = d * d
    if not (x3 * d2 - (n * n - (x1 + x2) * d2)).is_zero():
        raise TorsionFieldError("x(P1 + P2) mismatch")
    if not (y3 * d2 * d - (n * (x1 - x3) * d2 - y1 * d2 * d)).is_zero():
        raise TorsionFieldError("y(P1 + P2) mismatch")


def sample_field_elements(handle: TorsionFieldHandle, count: int, seed: int) -> list[NFElement]:
    """Seeded nonzero elements with small coordinates in the power basis of theta.

    About one draw in ten is a root of unity (-1 or a power of zeta) so that
    callers exercise their exclusion path; everything else is
    (c_0 + c_1 theta + ... + c_3 theta^3) / den with |c_i| <= 3.
    """
    if count <= 0:
        return []
    K = handle.K
    rng = random.Random(seed)
    top = min(K.d, 4)
    out: list[NFElement] = []
    while len(out) < count:
        if rng.random() < 0.1:
            e = handle.zeta ** rng.randrange(1, max(handle.N, 2)) * rng.choice([-1, 1])
        else:
            coords = [rng.randint(-3, 3) if rng.random() < 0.7 else 0 for _ in range(top)]
            e = K(coords) * Fraction(1, rng.choice([1, 1, 2, 3]))
        if not e.is_zero():
            out.append(e)
    return out


def root_of_unity_order(handle: TorsionFieldHandle, e: NFElement) -> int | None:
    """Order of e when it is a root of unity, confirmed by an exact power check."""
    vals = handle.embed(e)
    if any(abs(abs(v) - 1) > 1e-20 for v in vals):
        return None
    turn = Fraction(float(mpmath.arg(vals[0]) / (2 * mpmath.pi))).limit_denominator(4 * handle.K.d * handle.K.d + 4)
    n = turn.denominator
    if (e ** n) == handle.K.one():
        return n
    return None
