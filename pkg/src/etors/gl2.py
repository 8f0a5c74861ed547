"""Brute-force group theory in GL2(Z/N).

Matrices [[a, b], [c, d]] are encoded as the integer ((a N + b) N + c) N + d so
that whole groups live in numpy int64 arrays and products, inverses and
conjugations vectorise.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact.arith import is_prime, smallest_nonresidue

ENUMERATION_P_MAX = 13
MATERIALIZE_CAP = 10**7


class GuardViolation(ValueError):
    pass


class KernelMembershipError(ValueError):
    pass


class MaterializationCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# vectorised encoding


def encode(a, b, c, d, N: int):
    return ((np.asarray(a) % N * N + np.asarray(b) % N) * N + np.asarray(c) % N) * N + np.asarray(d) % N


def decode(codes, N: int):
    codes = np.asarray(codes, dtype=np.int64)
    d = codes % N
    c = codes // N % N
    b = codes // (N * N) % N
    a = codes // (N * N * N)
    return a, b, c, d


def mul_codes(x, y, N: int):
    a, b, c, d = decode(x, N)
    e, f, g, h = decode(y, N)
    return encode(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, N)


@lru_cache(maxsize=32)
def _unit_inverse_table(N: int) -> np.ndarray:
    inv = np.zeros(N, dtype=np.int64)
    for u in range(N):
        if math.gcd(u, N) == 1:
            inv[u] = pow(u, -1, N)
    return inv


def inv_codes(x, N: int):
    a, b, c, d = decode(x, N)
    det = (a * d - b * c) % N
    di = _unit_inverse_table(N)[det]
    return encode(di * d, -di * b, -di * c, di * a, N)


def det_codes(x, N: int):
    a, b, c, d = decode(x, N)
    return (a * d - b * c) % N


@lru_cache(maxsize=8)
def gl2_codes(N: int) -> np.ndarray:
    """Sorted codes of all of GL2(Z/N)."""
    allc = np.arange(N**4, dtype=np.int64)
    det = det_codes(allc, N)
    units = np.array([math.gcd(u, N) == 1 for u in range(N)])
    return allc[units[det]]


def gl2_order(N: int) -> int:
    out = N**4
    for p in {q for q in range(2, N + 1) if N % q == 0 and is_prime(q)}:
        out = out * (1 - Fraction(1, p)) * (1 - Fraction(1, p * p))
    return int(out)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatModN:
    N: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % self.N)

    @classmethod
    def identity(cls, N: int) -> "MatModN":
        return cls(N, 1, 0, 0, 1)

    @classmethod
    def from_code(cls, code: int, N: int) -> "MatModN":
        a, b, c, d = (int(v) for v in decode(code, N))
        return cls(N, a, b, c, d)

    @property
    def code(self) -> int:
        return ((self.a * self.N + self.b) * self.N + self.c) * self.N + self.d

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.N

    def is_unit(self) -> bool:
        return math.gcd(self.det, self.N) == 1

    def __mul__(self, o: "MatModN") -> "MatModN":
        return MatModN(self.N, self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __add__(self, o: "MatModN") -> "MatModN":
        return MatModN(self.N, self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def inverse(self) -> "MatModN":
        di = pow(self.det, -1, self.N)
        return MatModN(self.N, di * self.d, -di * self.b, -di * self.c, di * self.a)

    def __pow__(self, n: int) -> "MatModN":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = MatModN.identity(self.N), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def reduce(self, M: int) -> "MatModN":
        return MatModN(M, self.a, self.b, self.c, self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


@dataclass
class SubgroupHandle:
    N: int
    generators: list[MatModN]
    cap: int = MATERIALIZE_CAP
    _elements: np.ndarray | None = field(default=None, repr=False)

    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._elements = generate(self.N, [g.code for g in self.generators], self.cap)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements())

    def contains(self, codes) -> np.ndarray:
        els = self.elements()
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.searchsorted(els, codes)
        pos = np.minimum(pos, len(els) - 1)
        return els[pos] == codes

    def is_closed(self, samples: int | None = None, seed: int = 0) -> bool:
        els = self.elements()
        if samples is None:
            x = np.repeat(els, len(els))
            y = np.tile(els, len(els))
        else:
            rng = np.random.default_rng(seed)
            x = rng.choice(els, samples)
            y = rng.choice(els, samples)
        return bool(self.contains(mul_codes(x, y, self.N)).all() and self.contains(inv_codes(els, self.N)).all())


def generate(N: int, gen_codes: list[int], cap: int = MATERIALIZE_CAP) -> np.ndarray:
    """Sorted codes of the subgroup generated by the given unit matrices (frontier BFS)."""
    ident = int(encode(1, 0, 0, 1, N))
    gens = np.array(gen_codes, dtype=np.int64)
    if len(gens) and not np.all(np.isin(det_codes(gens, N) % N, [u for u in range(N) if math.gcd(u, N) == 1])):
        raise ValueError("generators must be invertible")
    seen = np.array([ident], dtype=np.int64)
    frontier = seen
    while len(frontier):
        prods = np.concatenate([mul_codes(frontier, g, N) for g in gens]) if len(gens) else np.array([], np.int64)
        prods = np.unique(prods)
        new = prods[~np.isin(prods, seen, assume_unique=True)]
        if len(seen) + len(new) > cap:
            raise MaterializationCapExceeded(f"subgroup exceeds the cap {cap}")
        seen = np.union1d(seen, new)
        frontier = new
    return seen


# ---------------------------------------------------------------------------
# non-split Cartan subgroups


def _guard(p: int):
    if not is_prime(p) or p < 5:
        raise GuardViolation(f"p = {p} must be a prime >= 5")
    if p > ENUMERATION_P_MAX:
        raise GuardViolation(f"p = {p} exceeds the enumeration guard {ENUMERATION_P_MAX}")


@dataclass(frozen=True)
class CartanData:
    p: int
    eps: int

    def embed(self, x: int, y: int) -> MatModN:
        return MatModN(self.p, x, self.eps * y, y, x)


@dataclass
class CartanSubgroup(SubgroupHandle):
    data: CartanData | None = None
    generator: MatModN | None = None


def _element_order(M: MatModN, bound: int) -> int:
    cur = M
    for k in range(1, bound + 1):
        if cur == MatModN.identity(M.N):
            return k
        cur = cur * M
    return -1


def nonsplit_cartan(p: int) -> CartanSubgroup:
    """The image of F_{p^2}^x in GL2(F_p) via x + y sqrt(eps) -> [[x, eps y], [y, x]]."""
    _guard(p)
    q = p * p
    data = CartanData(p, smallest_nonresidue(p))
    for x in range(p):
        for y in range(1, p):
            g = data.embed(x, y)
            if _element_order(g, q - 1) == q - 1:
                G = CartanSubgroup(p, [g], data=data, generator=g)
                if G.order != q - 1:
                    raise ArithmeticError("Cartan order mismatch")
                scalars = [int(encode(s, 0, 0, s, p)) for s in range(1, p)]
                if not G.contains(scalars).all():
                    raise ArithmeticError("Cartan subgroup misses a scalar")
                return G
    raise ArithmeticError("no generator of F_{p^2}^x found")


def _conjugate_all(g_code: int, hs: np.ndarray, N: int) -> np.ndarray:
    """h g h^-1 for every h in hs."""
    return mul_codes(mul_codes(hs, g_code, N), inv_codes(hs, N), N)


def normalizer(G: CartanSubgroup) -> np.ndarray:
    """Codes of h in GL2(F_p) with h G h^-1 = G (G cyclic, so test the generator)."""
    p = G.N
    _guard(p)
    hs = gl2_codes(p)
    return hs[G.contains(_conjugate_all(G.generator.code, hs, p))]


def normalizer_order(G: CartanSubgroup) -> int:
    return len(normalizer(G))


@dataclass
class ClosureReport:
    p: int
    size: int
    generates: bool
    generated_order: int
    gl2_order: int
    lower_bound: int
    conjugates: int
    intersection_orders: list[int]

    def to_dict(self) -> dict:
        return {"p": self.p, "conjugate_closure_size": self.size, "p_cubed": self.p**3,
                "lower_bound_(p-1)^2p^2/2": self.lower_bound, "generates": self.generates,
                "generated_order": self.generated_order, "gl2_order": self.gl2_order,
                "distinct_conjugates": self.conjugates,
                "intersection_orders": sorted(set(self.intersection_orders))}


def conjugate_closure(G: CartanSubgroup) -> ClosureReport:
    """Union of all GL2(F_p)-conjugates of G, its size, and the subgroup it generates."""
    p = G.N
    _guard(p)
    hs = gl2_codes(p)
    els = G.elements()
    union = np.unique(np.concatenate([_conjugate_all(int(g), hs, p) for g in els]))
    # one representative h per coset of the normaliser gives each conjugate once
    norm = normalizer(G)
    reps: list[int] = []
    covered = np.zeros(0, dtype=np.int64)
    for h in hs:
        if np.isin(h, covered):
            continue
        reps.append(int(h))
        covered = np.union1d(covered, mul_codes(np.full(len(norm), h), norm, p))
    conj_sets = [np.unique(_conjugate_all_set(els, h, p)) for h in reps]
    inter = [len(np.intersect1d(conj_sets[i], conj_sets[j], assume_unique=True))
             for i in range(len(conj_sets)) for j in range(i + 1, len(conj_sets))]
    full = len(gl2_codes(p))
    gen = generate(p, [int(c) for c in union[:: max(1, len(union) // 64)]])
    if len(gen) != full:
        gen = generate(p, [int(c) for c in union])
    return ClosureReport(p=p, size=len(union), generates=len(gen) == full, generated_order=len(gen),
                         gl2_order=full, lower_bound=(p - 1) ** 2 * p * p // 2, conjugates=len(reps),
                         intersection_orders=inter)


def _conjugate_all_set(els: np.ndarray, h: int, N: int) -> np.ndarray:
    return mul_codes(mul_codes(np.full(len(els), h), els, N), inv_codes(np.full(len(els), h), N), N)


# ---------------------------------------------------------------------------
# matrix logarithm on the kernel of reduction


def matrix_log(p: int, n: int, M: MatModN) -> MatModN:
    """L(M) in M2(F_p) with M = 1 + p^(n-1) L(M) mod p^n."""
    if n < 2:
        raise KernelMembershipError("n >= 2 required")
    N = p**n
    if M.N != N:
        raise KernelMembershipError(f"matrix must be taken mod {N}")
    pk = p ** (n - 1)
    entries = (M.a - 1, M.b, M.c, M.d - 1)
    if any(e % pk for e in entries):
        raise KernelMembershipError("matrix is not congruent to 1 mod p^(n-1)")
    return MatModN(p, *(e // pk for e in entries))


def kernel_elements(p: int, n: int) -> list[MatModN]:
    """All M = 1 + p^(n-1) A mod p^n with A in M2(F_p)."""
    N = p**n
    pk = p ** (n - 1)
    out = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    out.append(MatModN(N, 1 + pk * a, pk * b, pk * c, 1 + pk * d))
    return out


@dataclass
class LogCheck:
    p: int
    n: int
    checked: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "checked": self.checked, "failures": self.failures}


def log_additivity_check(p: int, n: int) -> LogCheck:
    """L(M1 M2) = L(M1) + L(M2) over all ordered pairs of the kernel (vectorised)."""
    N = p**n
    pk = p ** (n - 1)
    ker = np.array([M.code for M in kernel_elements(p, n)], dtype=np.int64)
    x = np.repeat(ker, len(ker))
    y = np.tile(ker, len(ker))
    prod = mul_codes(x, y, N)

    def logs(codes):
        a, b, c, d = decode(codes, N)
        return np.stack([(a - 1) // pk, b // pk, c // pk, (d - 1) // pk]) % p

    lhs = logs(prod)
    rhs = (logs(x) + logs(y)) % p
    fails = int(np.any(lhs != rhs, axis=0).sum())
    return LogCheck(p, n, len(x), fails)


def log_equivariance_check(p: int, n: int, samples: int, seed: int = 0) -> LogCheck:
    """L(s psi s^-1) = (s mod p) L(psi) (s mod p)^-1 on seeded pairs."""
    if n < 2:
        raise KernelMembershipError("n >= 2 required")
    N = p**n
    rng = random.Random(seed)
    ker = kernel_elements(p, n)
    fails = 0
    for _ in range(samples):
        while True:
            s = MatModN(N, *(rng.randrange(N) for _ in range(4)))
            if s.is_unit():
                break
        psi = rng.choice(ker)
        lhs = matrix_log(p, n, s * psi * s.inverse())
        sbar = s.reduce(p)
        rhs = sbar * matrix_log(p, n, psi) * sbar.inverse()
        fails += lhs != rhs
    return LogCheck(p, n, samples, fails)


# ---------------------------------------------------------------------------
# orbit bound for the kernel of reduction mod N/p


@dataclass
class OrbitCheck:
    N: int
    p: int
    group_order: int
    kernel_order: int
    centralizer_order: int
    passed: bool

    def to_dict(self) -> dict:
        return {"N": self.N, "p": self.p, "group_order": self.group_order, "kernel_order": self.kernel_order,
                "p^4": self.p**4, "centralizer_order": self.centralizer_order,
                "group_order/kernel_order": self.group_order / self.kernel_order, "passed": self.passed}


def full_group(N: int) -> SubgroupHandle:
    H = SubgroupHandle(N, [])
    H._elements = gl2_codes(N)
    return H


def centralizer_orbit_check(gamma: SubgroupHandle, psi: MatModN, p: int) -> OrbitCheck:
    """#H <= p^4 for H = gamma ∩ ker(mod N/p), and #C_gamma(psi) >= #gamma / #H."""
    N = gamma.N
    if N % p or not is_prime(p):
        raise ValueError("p must be a prime dividing N")
    M = N // p
    els = gamma.elements()
    a, b, c, d = decode(els, N)
    in_kernel = ((a - 1) % M == 0) & (b % M == 0) & (c % M == 0) & ((d - 1) % M == 0)
    H = els[in_kernel]
    psi_code = psi.code
    if not np.isin(psi_code, H):
        raise KernelMembershipError("psi must lie in gamma and reduce to 1 mod N/p")
    commute = mul_codes(els, psi_code, N) == mul_codes(np.full(len(els), psi_code), els, N)
    cent = int(commute.sum())
    ok = len(H) <= p**4 and cent * len(H) >= len(els)
    return OrbitCheck(N, p, len(els), len(H), cent, bool(ok))
