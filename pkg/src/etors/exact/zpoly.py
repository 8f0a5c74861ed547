"""Integer and modular polynomial kernels on plain coefficient lists.

Lists are ascending and trimmed (no trailing zeros); ``[]`` is the zero
polynomial.  Functions with a ``p``/``m`` argument work with residues in
``[0, m)``.
"""
from __future__ import annotations

import math
import random
from functools import reduce


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: list[int]) -> int:
    return len(a) - 1


def add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def scale(a: list[int], c: int) -> list[int]:
    return trim([c * x for x in a])


def _schoolbook(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def mul(a: list[int], b: list[int]) -> list[int]:
    """Product over the integers; Kronecker substitution for larger inputs."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < 12:
        return trim(_schoolbook(a, b))
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 2
    pa = _pack(a, bits)
    pb = _pack(b, bits)
    return trim(_unpack(pa * pb, bits, len(a) + len(b) - 1))


def _pack(a: list[int], bits: int) -> int:
    acc = 0
    for x in reversed(a):
        acc = (acc << bits) + x
    return acc


def _unpack(n: int, bits: int, count: int) -> list[int]:
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(count):
        r = n & mask
        if r >= half:
            r -= 1 << bits
        out.append(r)
        n = (n - r) >> bits
    return out


def evaluate(a: list[int], x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a: list[int]) -> list[int]:
    return trim([i * a[i] for i in range(1, len(a))])


def content(a: list[int]) -> int:
    return reduce(math.gcd, a, 0)


def primitive(a: list[int]) -> list[int]:
    g = content(a)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def divmod_z(a: list[int], b: list[int]) -> tuple[list[int], list[int]] | None:
    """Exact division over Z; returns None if some quotient coefficient is fractional."""
    if not b:
        raise ZeroDivisionError
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(rem) - 1 < db:
        return [], trim(rem)
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db]
        if c % lb:
            return None
        c //= lb
        quot[k] = c
        if c:
            for j in range(db + 1):
                rem[k + j] -= c * b[j]
    return trim(quot), trim(rem[:db])


def exact_quotient(a: list[int], b: list[int]) -> list[int] | None:
    r = divmod_z(a, b)
    if r is None or r[1]:
        return None
    return r[0]


# ---------------------------------------------------------------------------
# arithmetic modulo m


def reduce_mod(a: list[int], m: int) -> list[int]:
    return trim([x % m for x in a])


def symmetric(a: list[int], m: int) -> list[int]:
    h = m // 2
    return trim([x - m if x > h else x for x in (y % m for y in a)])


def add_mod(a, b, m):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def sub_mod(a, b, m):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def mul_mod(a, b, m):
    if not a or not b:
        return []
    if min(len(a), len(b)) < 16:
        return trim([x % m for x in _schoolbook(a, b)])
    return reduce_mod(mul(a, b), m)


def monic_mod(a, m):
    if not a:
        return a
    inv = pow(a[-1], -1, m)
    return [x * inv % m for x in a]


def divmod_mod(a, b, m):
    """Division mod m; the leading coefficient of b must be a unit mod m."""
    b = reduce_mod(b, m)
    if not b:
        raise ZeroDivisionError
    rem = [x % m for x in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, m)
    if len(rem) - 1 < db:
        return [], trim(rem)
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] * inv % m
        quot[k] = c
        if c:
            for j in range(db + 1):
                rem[k + j] = (rem[k + j] - c * b[j]) % m
    return trim(quot), trim(rem[:db])


def rem_mod(a, b, m):
    return divmod_mod(a, b, m)[1]


def gcd_mod(a, b, p):
    """Monic gcd over F_p."""
    a = reduce_mod(list(a), p)
    b = reduce_mod(list(b), p)
    while b:
        a, b = b, rem_mod(a, b, p)
    return monic_mod(a, p)


def xgcd_mod(a, b, p):
    """Return (g, s, t) with s a + t b = g monic over F_p."""
    r0, r1 = reduce_mod(list(a), p), reduce_mod(list(b), p)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = divmod_mod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mod(s0, mul_mod(q, s1, p), p)
        t0, t1 = t1, sub_mod(t0, mul_mod(q, t1, p), p)
    if not r0:
        return [], [], []
    inv = pow(r0[-1], -1, p)
    return ([x * inv % p for x in r0], [x * inv % p for x in s0], [x * inv % p for x in t0])


def powmod_mod(base, e: int, f, p):
    """base^e mod (f, p)."""
    out = [1]
    b = rem_mod(base, f, p)
    while e:
        if e & 1:
            out = rem_mod(mul_mod(out, b, p), f, p)
        e >>= 1
        if e:
            b = rem_mod(mul_mod(b, b, p), f, p)
    return out


def derivative_mod(a, p):
    return trim([i * a[i] % p for i in range(1, len(a))])


def is_squarefree_mod(a, p) -> bool:
    a = reduce_mod(list(a), p)
    if len(a) <= 2:
        return True
    d = derivative_mod(a, p)
    if not d:
        return False
    return len(gcd_mod(a, d, p)) == 1


# ---------------------------------------------------------------------------
# gcd over Z


_GCD_PRIMES = (1000000007, 998244353, 1000000009, 2147483647, 4294967291)


def gcd_z(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd over Z (positive leading coefficient).

    A gcd of degree 0 modulo a prime not dividing both leading coefficients
    certifies coprimality.  Otherwise we fall back to the primitive remainder
    sequence.
    """
    a, b = primitive(list(a)), primitive(list(b))
    if not a:
        return b
    if not b:
        return a
    for p in _GCD_PRIMES[:2]:
        if a[-1] % p and b[-1] % p:
            if len(gcd_mod(a, b, p)) == 1:
                return [1]
            break
    return _gcd_prs(a, b)


def _gcd_prs(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    while b:
        da, db = len(a) - 1, len(b) - 1
        lb = b[-1]
        # pseudo-remainder lb^(da-db+1) a mod b
        r = [x * lb ** (da - db + 1) for x in a]
        res = divmod_z(r, b)
        assert res is not None
        r = primitive(res[1])
        a, b = b, r
    return primitive(a)


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def _mobius(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def cyclotomic(n: int) -> list[int]:
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = mul(num, factor)
        else:
            den = mul(den, factor)
    q = exact_quotient(num, den)
    assert q is not None
    return q


def random_poly_mod(degree: int, p: int, rng: random.Random) -> list[int]:
    return trim([rng.randrange(p) for _ in range(degree + 1)])
