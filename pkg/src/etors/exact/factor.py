"""Factorisation of integer polynomials (Zassenhaus at desk scale).

Pipeline for a square-free primitive input f:

1. cheap irreducibility shortcuts (linear, Eisenstein after small shifts,
   irreducible modulo a good prime, incompatible degree patterns);
2. factor modulo a few good primes with Cantor-Zassenhaus and keep the prime
   with the fewest modular factors;
3. multifactor Hensel lifting along a binary factor tree up to the Mignotte
   bound;
4. subset recombination with trial division over Z.

The degree cap defaults to 64.
"""
from __future__ import annotations

import math
import random
from functools import reduce

from . import zpoly as Z
from .arith import factorint, is_prime
from .poly import Polynomial

DEGREE_CAP = 64


class DegreeCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# factoring over F_p


def distinct_degree(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Distinct-degree factorisation of a monic square-free f over F_p."""
    out = []
    f = Z.monic_mod(Z.reduce_mod(list(f), p), p)
    h = [0, 1]
    d = 0
    while 2 * (d + 1) <= Z.deg(f):
        d += 1
        h = Z.powmod_mod(h, p, f, p)
        g = Z.gcd_mod(f, Z.sub_mod(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = Z.divmod_mod(f, g, p)[0]
            h = Z.rem_mod(h, f, p) if len(f) > 1 else h
    if len(f) > 1:
        out.append((f, Z.deg(f)))
    return out


def equal_degree(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles (p odd)."""
    n = Z.deg(f)
    if n == d:
        return [f]
    if p == 2:
        raise ValueError("characteristic 2 is not used for factoring")
    e = (p**d - 1) // 2
    while True:
        a = Z.random_poly_mod(n - 1, p, rng)
        if len(a) < 2:
            continue
        g = Z.gcd_mod(f, a, p)
        if 1 < len(g) < len(f):
            break
        b = Z.powmod_mod(a, e, f, p)
        g = Z.gcd_mod(f, Z.sub_mod(b, [1], p), p)
        if 1 < len(g) < len(f):
            break
    h = Z.divmod_mod(f, g, p)[0]
    return equal_degree(g, d, p, rng) + equal_degree(Z.monic_mod(h, p), d, p, rng)


def factor_mod_p(f: list[int], p: int, seed: int = 0) -> list[list[int]]:
    """Monic irreducible factors of square-free f over F_p."""
    rng = random.Random(seed * 1000003 + p)
    out = []
    for g, d in distinct_degree(f, p):
        out.extend(equal_degree(g, d, p, rng))
    return sorted(out, key=lambda g: (len(g), g))


def degree_pattern_mod_p(f: list[int], p: int) -> list[int]:
    pattern = []
    for g, d in distinct_degree(f, p):
        pattern.extend([d] * (Z.deg(g) // d))
    return sorted(pattern)


def _subset_sums(pattern: list[int]) -> set[int]:
    sums = {0}
    for d in pattern:
        sums |= {s + d for s in sums}
    return sums


def is_irreducible_mod_p(f: list[int], p: int) -> bool:
    f = Z.reduce_mod(list(f), p)
    if Z.deg(f) < 1 or not Z.is_squarefree_mod(f, p):
        return False
    dd = distinct_degree(f, p)
    return len(dd) == 1 and dd[0][1] == Z.deg(f)


# ---------------------------------------------------------------------------
# Hensel lifting


def _hensel_step(f, g, h, s, t, m):
    """One quadratic step of von zur Gathen-Gerhard 15.10 modulo m -> m^2.

    Input: f = g h mod m, s g + t h = 1 mod m, h monic.
    """
    m2 = m * m
    e = Z.sub_mod(f, Z.mul_mod(g, h, m2), m2)
    q, r = Z.divmod_mod(Z.mul_mod(s, e, m2), h, m2)
    g1 = Z.add_mod(Z.add_mod(g, Z.mul_mod(t, e, m2), m2), Z.mul_mod(q, g, m2), m2)
    h1 = Z.add_mod(h, r, m2)
    b = Z.sub_mod(Z.add_mod(Z.mul_mod(s, g1, m2), Z.mul_mod(t, h1, m2), m2), [1], m2)
    c, d = Z.divmod_mod(Z.mul_mod(s, b, m2), h1, m2)
    s1 = Z.sub_mod(s, d, m2)
    t1 = Z.sub_mod(Z.sub_mod(t, Z.mul_mod(t, b, m2), m2), Z.mul_mod(c, g1, m2), m2)
    return g1, h1, s1, t1


def hensel_lift(f: list[int], factors: list[list[int]], p: int, k: int) -> list[list[int]]:
    """Lift monic factors of f mod p to factors mod p^k with f = lc * prod mod p^k."""
    if len(factors) == 1:
        mod = p**k
        inv = pow(f[-1], -1, mod)
        return [Z.reduce_mod([c * inv for c in f], mod)]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    g0 = reduce(lambda a, b: Z.mul_mod(a, b, p), left, [1])
    h0 = reduce(lambda a, b: Z.mul_mod(a, b, p), right, [1])
    g0 = Z.reduce_mod([c * f[-1] for c in g0], p)  # g carries the leading coefficient
    _, s, t = Z.xgcd_mod(g0, h0, p)
    m, e = p, 1
    g, h = g0, h0
    while e < k:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m, e = m * m, e * 2
    mod = p**k
    g, h = Z.reduce_mod(g, mod), Z.reduce_mod(h, mod)
    # g = lc * prod(left) and h = prod(right) modulo p^k; recurse on each side
    lifted_left = hensel_lift(g, left, p, k)
    lifted_right = hensel_lift(h, right, p, k)
    return lifted_left + lifted_right


# ---------------------------------------------------------------------------
# factoring over Z


def _mignotte_bound(f: list[int]) -> int:
    n = Z.deg(f)
    norm = math.isqrt(sum(c * c for c in f)) + 1
    return (1 << n) * norm * abs(f[-1])


def _eisenstein(f: list[int]) -> bool:
    lc, c0 = f[-1], f[0]
    if c0 == 0 or abs(c0).bit_length() > 100:
        return False
    for p in factorint(c0):
        if lc % p == 0 or c0 % (p * p) == 0:
            continue
        if all(c % p == 0 for c in f[:-1]):
            return True
    return False


def _shift(f: list[int], t: int) -> list[int]:
    out: list[int] = []
    for c in reversed(f):
        out = Z.add(Z.mul(out, [t, 1]), [c])
    return out


def _good_primes(f: list[int], count: int, start: int = 3):
    p = start
    found = 0
    while found < count:
        p += 1
        if not is_prime(p) or f[-1] % p == 0:
            continue
        if Z.is_squarefree_mod(f, p):
            found += 1
            yield p


def irreducible_shortcut(f: list[int]) -> bool | None:
    """True if a cheap certificate of irreducibility exists, None otherwise."""
    n = Z.deg(f)
    if n <= 1:
        return True
    if Z.content(f) != 1:
        return None
    if n <= 24:
        for t in (0, 1, -1, 2, -2):
            g = f if t == 0 else _shift(f, t)
            if _eisenstein(g):
                return True
    possible = set(range(1, n))
    for i, p in enumerate(_good_primes(f, 6)):
        pattern = degree_pattern_mod_p(f, p)
        if len(pattern) == 1:
            return True
        possible &= _subset_sums(pattern)
        if not possible - {0, n}:
            return True
    return None


def factor_squarefree(f: list[int], degree_cap: int = DEGREE_CAP) -> list[list[int]]:
    """Irreducible factors over Z of a primitive square-free integer polynomial."""
    f = Z.primitive(list(f))
    n = Z.deg(f)
    if n > degree_cap:
        raise DegreeCapExceeded(f"degree {n} exceeds cap {degree_cap}")
    if n <= 1:
        return [f]
    if f[0] == 0:
        rest = Z.primitive(f[1:])
        return [[0, 1]] + (factor_squarefree(rest, degree_cap) if Z.deg(rest) >= 1 else [])
    if irreducible_shortcut(f) is True:
        return [f]
    # choose the prime with fewest modular factors among a handful
    best = None
    for p in _good_primes(f, 5, start=max(3, 2 * n)):
        facs = factor_mod_p(f, p)
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1:
            return [f]
    p, facs = best
    bound = 2 * _mignotte_bound(f) + 1
    k = 1
    while p**k <= bound:
        k *= 2
    mod = p**k
    lifted = hensel_lift(f, facs, p, k)
    return _recombine(f, lifted, mod)


def _recombine(f: list[int], lifted: list[list[int]], mod: int) -> list[list[int]]:
    from itertools import combinations

    out = []
    remaining = list(range(len(lifted)))
    g = list(f)
    s = 1
    while 2 * s <= len(remaining):
        found = False
        for subset in combinations(remaining, s):
            lc = g[-1]
            cand = [lc % mod]
            for i in subset:
                cand = Z.mul_mod(cand, lifted[i], mod)
            cand = Z.primitive(Z.symmetric(cand, mod))
            q = Z.exact_quotient(g, cand)
            if q is None:
                continue
            out.append(cand)
            g = Z.primitive(q)
            remaining = [i for i in remaining if i not in subset]
            found = True
            break
        if not found:
            s += 1
    out.append(Z.primitive(g))
    return out


def factor_z(f: list[int], degree_cap: int = DEGREE_CAP) -> list[tuple[list[int], int]]:
    """Full factorisation of a nonzero integer polynomial (content dropped)."""
    poly = Polynomial(f)
    if poly.degree < 1:
        return []
    out: list[tuple[list[int], int]] = []
    for part, mult in poly.squarefree_decomposition():
        for g in factor_squarefree(part.primitive().int_coeffs(), degree_cap):
            out.append((g, mult))
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


def factor(f: Polynomial, degree_cap: int = DEGREE_CAP) -> list[tuple[Polynomial, int]]:
    """Factor a rational polynomial into monic irreducibles with multiplicity."""
    if f.degree < 1:
        return []
    return [(Polynomial(g).monic(), m) for g, m in factor_z(f.primitive().int_coeffs(), degree_cap)]


def is_irreducible(f: Polynomial, degree_cap: int = DEGREE_CAP) -> bool:
    if f.degree < 1:
        return False
    if f.degree == 1:
        return True
    if not f.is_squarefree():
        return False
    ints = f.primitive().int_coeffs()
    if irreducible_shortcut(ints) is True:
        return True
    return len(factor_squarefree(ints, degree_cap)) == 1
