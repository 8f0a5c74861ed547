"""The unramified Frobenius estimate, checked in valuations.

For alpha in Q_{p^f} with q = p^2 and phi_q = phi_p^2 the claim is

    v(phi_q(alpha) - alpha^q) >= 1 + min(0, v(phi_q alpha)) + q * min(0, v(alpha)).

A non-integral alpha is carried as beta / p^m with beta integral, so every
valuation stays exact in the truncated ring.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .unramified import UnramifiedElement, UnramifiedRing, frobenius


@dataclass
class Metric2Result:
    passed: bool
    v_alpha: int
    v_phi_alpha: int
    lhs_valuation: int | None  # None: the difference vanished to working precision
    lhs_lower_bound: int
    rhs_bound: int
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _val(e: UnramifiedElement) -> int | None:
    return e.valuation_or_none()


def check_metric2(beta: UnramifiedElement, shift: int = 0) -> Metric2Result:
    """Check the estimate for alpha = beta / p^shift (beta integral, shift >= 0)."""
    R = beta.ring
    p, q = R.p, R.p**2
    vb = _val(beta)
    if vb is None:
        raise ValueError("alpha must be nonzero at working precision")
    v_alpha = vb - shift
    phi = frobenius(beta, 2)
    v_phi = _val(phi) - shift
    # phi(alpha) - alpha^q = (phi(beta) p^{shift (q-1)} - beta^q) / p^{shift q}
    if shift:
        num = phi * (p ** (shift * (q - 1))) - beta**q
    else:
        num = phi - beta**q
    vn = _val(num)
    bound = 1 + min(0, v_phi) + q * min(0, v_alpha)
    if vn is None:
        lower = R.k - shift * q
        passed = lower >= bound
        note = "difference vanishes mod p^k; lower bound only" + ("" if passed else ", inconclusive")
        return Metric2Result(passed, v_alpha, v_phi, None, lower, bound, note)
    lhs = vn - shift * q
    return Metric2Result(lhs >= bound, v_alpha, v_phi, lhs, lhs, bound)


def check_metric2_element(alpha: UnramifiedElement, include_inverse_branch: bool = True) -> list[Metric2Result]:
    """Check alpha itself and, for a non-unit alpha = p^v u, also alpha^{-1} = u^{-1} / p^v."""
    out = [check_metric2(alpha)]
    v = _val(alpha)
    if include_inverse_branch and v:
        R = alpha.ring
        u = R([c // R.p**v for c in alpha.coords])
        out.append(check_metric2(u.inverse(), v))
    return out


@dataclass
class Metric2Scan:
    p: int
    f: int
    k: int
    samples: int
    seed: int
    checks: int
    failures: int
    vacuous: int
    equality_cases: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def metric2_scan(p: int, f: int, samples: int, seed: int, k: int = 20) -> Metric2Scan:
    """Seeded units and non-units (valuation 1..3, about 40 percent), each with its inverse branch."""
    if f not in (2, 4):
        raise ValueError("f must be 2 or 4 so that phi_p^2 acts on Q_{p^f}")
    R = UnramifiedRing(p, f, k)
    rng = random.Random(seed)
    checks = failures = vacuous = equal = 0
    for _ in range(samples):
        v = 0 if rng.random() < 0.6 else rng.randint(1, 3)
        for r in check_metric2_element(R.random(rng, v)):
            checks += 1
            failures += not r.passed
            vacuous += r.lhs_valuation is None
            equal += r.lhs_valuation == r.rhs_bound
    return Metric2Scan(p, f, k, samples, seed, checks, failures, vacuous, equal)
