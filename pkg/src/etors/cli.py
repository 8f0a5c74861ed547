"""Command-line front end: every run writes one JSON report envelope.

Exit codes: 0 when every check passes, 1 when at least one check fails or a
computation reports an error, 2 for usage or configuration errors (no report
is written in that case).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__

SCHEMA_VERSION = "1"


class ConfigError(ValueError):
    """Bad flag values; mapped to exit code 2."""


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None
    tolerance: object = None

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "value": self.value, "tolerance": self.tolerance}


@dataclass
class ReportEnvelope:
    command: str
    config: dict
    results: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        failed = [c.name for c in self.checks if not c.passed]
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "etors", "version": __version__},
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "checks": [c.to_dict() for c in self.checks],
            "errors": self.errors,
            "summary": {"checks": len(self.checks), "failed": failed, "passed": self.ok},
            "timings": self.timings,
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    if hasattr(obj, "value") and type(obj).__module__ != "builtins" and isinstance(obj.value, str):
        return obj.value  # enums
    return obj


# ---------------------------------------------------------------------------
# argument parsing helpers


def _parse_pair(text: str, what: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"{what} must be given as two comma-separated numbers, got {text!r}")
    try:
        return Fraction(parts[0].strip()), Fraction(parts[1].strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {what} {text!r}: {exc}") from None


def _curve(text: str):
    from .elliptic import curve_new
    a, b = _parse_pair(text, "--curve")
    if a.denominator != 1 or b.denominator != 1:
        raise ConfigError("--curve expects an integral short Weierstrass pair a,b")
    try:
        return curve_new(int(a), int(b))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _point(curve, text: str):
    x, y = _parse_pair(text, "--point")
    try:
        return curve.point(x, y)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _prime(p: int, lower: int = 2) -> int:
    from .exact.arith import is_prime
    if p < lower or not is_prime(p):
        raise ConfigError(f"--p must be a prime >= {lower}, got {p}")
    return p


# ---------------------------------------------------------------------------
# command handlers: each fills the envelope in place


def cmd_heights(args, rep: ReportEnvelope) -> None:
    from .heights import HEIGHT_TOL, AlgebraicNumber, NotAlgebraicNumberInput, is_root_of_unity, weil_height
    try:
        alpha = AlgebraicNumber.from_minpoly(args.minpoly)
    except (NotAlgebraicNumberInput, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    prof = weil_height(alpha)
    rep.results["minpoly"] = str(alpha.minpoly)
    rep.results["height"] = prof.to_dict()
    rep.results["root_of_unity_order"] = is_root_of_unity(alpha)
    rep.checks.append(Check("error_bound_within_tolerance", prof.error_bound <= HEIGHT_TOL,
                            prof.error_bound, HEIGHT_TOL))
    rep.checks.append(Check("height_nonnegative", prof.h >= -HEIGHT_TOL, prof.h, HEIGHT_TOL))


def cmd_scan_primes(args, rep: ReportEnvelope) -> None:
    from .prime_select import NotFoundBelowBound, find_admissible_prime
    curve = _curve(args.curve)
    try:
        cert = find_admissible_prime(curve, args.pmax, args.lmax)
    except NotFoundBelowBound as exc:
        rep.errors.append(f"NotFoundBelowBound: {exc}")
        rep.results["certificate"] = None
        return
    rep.results["certificate"] = cert.to_dict()
    rep.checks.append(Check("P1", cert.P1, cert.a_p))
    rep.checks.append(Check("P2_verified", cert.P2.value == "Verified", cert.P2.value))


def cmd_group_lemma(args, rep: ReportEnvelope) -> None:
    from .gl2 import GuardViolation, conjugate_closure, gl2_order, nonsplit_cartan, normalizer_order
    p = _prime(args.p, 3)
    try:
        G = nonsplit_cartan(p)
    except GuardViolation as exc:
        raise ConfigError(str(exc)) from None
    norm = normalizer_order(G)
    clo = conjugate_closure(G)
    rep.results.update({"cartan": G.order, "normalizer": norm, "closure": clo.size,
                        "generated": clo.generated_order, "report": clo.to_dict()})
    rep.checks += [
        Check("cartan_order", G.order == p * p - 1, G.order, p * p - 1),
        Check("normalizer_order", norm == 2 * (p * p - 1), norm, 2 * (p * p - 1)),
        Check("closure_exceeds_p_cubed", clo.size > p**3, clo.size, p**3),
        Check("closure_at_least_lower_bound", clo.size >= clo.lower_bound, clo.size, clo.lower_bound),
        Check("closure_generates_gl2", clo.generated_order == gl2_order(p), clo.generated_order, gl2_order(p)),
        Check("intersections_are_scalars", set(clo.intersection_orders) == {p - 1},
              sorted(set(clo.intersection_orders)), p - 1),
    ]


def cmd_matrix_log(args, rep: ReportEnvelope) -> None:
    from .gl2 import log_additivity_check, log_equivariance_check
    p = _prime(args.p, 3)
    add = log_additivity_check(p, args.n)
    eqv = log_equivariance_check(p, args.n, args.samples, args.seed)
    rep.results.update({"additivity": add.to_dict(), "equivariance": eqv.to_dict()})
    rep.checks += [Check("additivity", add.passed, add.failures, 0),
                   Check("equivariance", eqv.passed, eqv.failures, 0)]


def cmd_metric(args, rep: ReportEnvelope) -> None:
    from .padic import metric2_scan
    p = _prime(args.p)
    if args.f not in (2, 4):
        raise ConfigError("--f must be 2 or 4")
    scan = metric2_scan(p, args.f, args.samples, args.seed, args.precision)
    rep.results["scan"] = scan.to_dict()
    rep.checks.append(Check("metric_inequality", scan.passed, scan.failures, 0))


def cmd_formal_group(args, rep: ReportEnvelope) -> None:
    from .padic import NotSupersingular, UnramifiedRing, lubin_tate_signature, sqrt_unit
    p = _prime(args.p, 3)
    curve = _curve(args.curve)
    try:
        plain = lubin_tate_signature(curve, p)
    except NotSupersingular as exc:
        rep.errors.append(f"NotSupersingular: {exc}")
        return
    rep.results["untwisted"] = plain.to_dict()
    rep.checks.append(Check("untwisted_congruences", not plain.nonzero_below_q and not plain.nonzero_above_q,
                            plain.sign, "exact mod p"))
    if args.twist is not None:
        # quadratic twist by sqrt(D): (a, b) -> (a D, b D sqrt(D)) over Z_{p^2}
        R = UnramifiedRing(p, 2, 20)
        D = args.twist
        if D % p == 0:
            raise ConfigError("--twist must be a unit at p")
        s = sqrt_unit(R(D))
        tw = lubin_tate_signature((R(int(curve.a) * D), R(int(curve.b) * D) * s), p)
        rep.results["twisted"] = {"D": D, **tw.to_dict()}
        rep.checks.append(Check("twist_flips_sign", tw.sign == -plain.sign, tw.sign, "exact mod p"))


def cmd_nt_height(args, rep: ReportEnvelope) -> None:
    from .neron_tate import CoordinateBlowup, nt_height
    curve = _curve(args.curve)
    P = _point(curve, args.point)
    if P.is_infinity:
        raise ConfigError("--point must be an affine point")
    try:
        r = nt_height(curve, P, args.method, args.tol)
    except CoordinateBlowup as exc:
        rep.errors.append(f"CoordinateBlowup: {exc}")
        return
    rep.results["report"] = r.to_dict()
    rep.checks.append(Check("nonnegative", r.total >= -args.tol, r.total, args.tol))
    if args.method == "both":
        diff = abs(r.total - r.limit)
        rep.checks.append(Check("local_vs_limit", diff < 1e-6, diff, 1e-6))


def cmd_haar(args, rep: ReportEnvelope) -> None:
    from .neron_tate import haar_integral_lambda
    r = haar_integral_lambda(_curve(args.curve), args.samples, args.seed)
    rep.results["estimate"] = r.to_dict()
    rep.checks += [Check("b2_integral_zero", r.b2_integral == 0, str(r.b2_integral), 0),
                   Check("within_3_stderr", abs(r.estimate) < 3 * r.stderr, r.estimate, 3 * r.stderr)]


def cmd_bilu(args, rep: ReportEnvelope) -> None:
    from .equidist import bilu_discrepancy
    from .heights import NotAlgebraicNumberInput
    try:
        r = bilu_discrepancy(args.minpoly, args.m)
    except (NotAlgebraicNumberInput, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    rep.results["discrepancy"] = r.to_dict()
    rep.checks.append(Check("hypothesis_applies", r.applicable, r.note or None))


def cmd_suz(args, rep: ReportEnvelope) -> None:
    from .equidist import suz_fiber_demo
    curve = _curve(args.curve)
    P0 = _point(curve, args.point)
    if not 0 <= args.kmax <= 8:
        raise ConfigError("--kmax must lie in 0..8")
    try:
        reports = suz_fiber_demo(curve, P0, args.kmax, args.bins)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rep.results["fibers"] = [{k: v for k, v in r.to_dict().items() if k != "histogram"} for r in reports]
    chi = [r.chi_square for r in reports]
    rep.checks.append(Check("chi_square_non_increasing", all(a >= b for a, b in zip(chi, chi[1:])), chi))
    res = [r.check_residual for r in reports[1:]]
    rep.checks.append(Check("division_points_double_back", all(x < 1e-8 for x in res), max(res, default=0.0), 1e-8))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(f"# k={r.k}\n")
                fh.write(r.csv())


def cmd_choose_m(args, rep: ReportEnvelope) -> None:
    from .equidist import choose_m
    from .prime_select import gap_constants
    if args.c is not None:
        c = args.c
    else:
        consts = gap_constants(_prime(args.p, 5))
        c = consts.ramified if args.ramified else consts.unramified
    if not c > 0:
        raise ConfigError("--c must be positive")
    r = choose_m(c)
    rep.results["truncation"] = r.to_dict()
    rep.checks.append(Check("both_conditions", r.satisfied(), r.m))


def cmd_gap_scan(args, rep: ReportEnvelope) -> None:
    from .elliptic import TorsionFieldError
    from .prime_select import NotFoundBelowBound, empirical_gap_scan, find_admissible_prime
    curve = _curve(args.curve)
    try:
        cert = find_admissible_prime(curve, args.pmax, args.lmax) if args.p is None else _prime(args.p, 5)
    except NotFoundBelowBound as exc:
        rep.errors.append(f"NotFoundBelowBound: {exc}")
        return
    rep.results["prime"] = cert.to_dict() if hasattr(cert, "to_dict") else {"p": cert}
    for N in args.N:
        try:
            r = empirical_gap_scan(curve, cert, N, args.samples, args.seed)
        except (TorsionFieldError, ValueError) as exc:
            rep.errors.append(f"N={N}: {exc}")
            continue
        rep.results[f"N={N}"] = r.to_dict()
        rep.checks.append(Check(f"no_violations_N{N}", not r.violations and r.scanned == args.samples,
                                len(r.violations), r.bound))


def cmd_all(args, rep: ReportEnvelope) -> None:
    """Every module's checks at default settings; the exit code is their conjunction."""
    ns = argparse.Namespace
    seed = args.seed
    jobs: list[tuple[str, Callable, argparse.Namespace]] = [
        ("heights", cmd_heights, ns(minpoly="x^3-2")),
        ("scan-primes", cmd_scan_primes, ns(curve="5,1", pmax=200, lmax=10**4)),
        ("verify group-lemma p=5", cmd_group_lemma, ns(p=5)),
        ("verify group-lemma p=7", cmd_group_lemma, ns(p=7)),
        ("verify matrix-log", cmd_matrix_log, ns(p=5, n=2, samples=args.samples, seed=seed)),
        ("verify metric", cmd_metric, ns(p=5, f=2, samples=args.samples, seed=seed, precision=20)),
        ("verify formal-group", cmd_formal_group, ns(curve="5,1", p=5, twist=2)),
        ("verify haar", cmd_haar, ns(curve="0,-2", samples=10**5, seed=seed)),
        ("nt-height", cmd_nt_height, ns(curve="0,-2", point="3,5", method="both", tol=1e-7)),
        ("equidist bilu", cmd_bilu, ns(minpoly="x^200-2", m=1)),
        ("equidist suz", cmd_suz, ns(curve="0,-2", point="3,5", kmax=6, bins=16, csv=None)),
        ("equidist choose-m", cmd_choose_m, ns(c=None, p=5, ramified=False)),
        ("gap-scan", cmd_gap_scan, ns(curve="5,1", pmax=200, lmax=10**4, p=None, N=[2],
                                      samples=min(args.samples, 200), seed=seed)),
    ]
    for name, fn, sub_args in jobs:
        sub = ReportEnvelope(name, vars(sub_args))
        t0 = time.perf_counter()
        fn(sub_args, sub)
        rep.timings[name] = time.perf_counter() - t0
        rep.results[name] = {"results": sub.results, "errors": sub.errors, "passed": sub.ok}
        rep.checks += [Check(f"{name}: {c.name}", c.passed, c.value, c.tolerance) for c in sub.checks]
        rep.errors += [f"{name}: {e}" for e in sub.errors]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="etors", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, parent=sub, **kw):
        p = parent.add_parser(name, **kw)
        p.set_defaults(handler=fn)
        p.add_argument("--out", help="write the JSON report here (stdout otherwise)")
        return p

    p = add("heights", cmd_heights, help="Weil height of an algebraic number")
    p.add_argument("--minpoly", required=True)

    p = add("scan-primes", cmd_scan_primes, help="least admissible prime for a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--lmax", type=int, default=10**4)

    verify = sub.add_parser("verify", help="finite verifications").add_subparsers(dest="what", required=True)
    p = add("group-lemma", cmd_group_lemma, verify)
    p.add_argument("--p", type=int, default=5)
    p = add("matrix-log", cmd_matrix_log, verify)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--seed", type=int, required=True)
    p = add("metric", cmd_metric, verify)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--f", type=int, default=2)
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--precision", type=int, default=20)
    p = add("formal-group", cmd_formal_group, verify)
    p.add_argument("--curve", default="5,1")
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--twist", type=int, help="also check the quadratic twist by sqrt(D) over Z_{p^2}")
    p = add("haar", cmd_haar, verify)
    p.add_argument("--curve", required=True)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, required=True)

    p = add("nt-height", cmd_nt_height, help="Neron-Tate height of a rational point")
    p.add_argument("--curve", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--method", choices=("limit", "local", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-8)

    eq = sub.add_parser("equidist", help="equidistribution demos").add_subparsers(dest="what", required=True)
    p = add("bilu", cmd_bilu, eq)
    p.add_argument("--minpoly", required=True)
    p.add_argument("--m", type=int, default=1)
    p = add("suz", cmd_suz, eq)
    p.add_argument("--curve", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--bins", type=int, default=16)
    p.add_argument("--csv", help="write the binned histograms here")
    p = add("choose-m", cmd_choose_m, eq)
    p.add_argument("--c", type=float)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--ramified", action="store_true")

    p = add("gap-scan", cmd_gap_scan, help="heights of sampled torsion-field elements against the gap")
    p.add_argument("--curve", required=True)
    p.add_argument("--N", type=int, nargs="+", default=[2])
    p.add_argument("--p", type=int, help="use this prime instead of searching")
    p.add_argument("--pmax", type=int, default=200)
    p.add_argument("--lmax", type=int, default=10**4)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)

    p = add("all", cmd_all, help="run every module's checks")
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--seed", type=int, required=True)
    return ap


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "out")}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    name = " ".join(x for x in (args.command, getattr(args, "what", None)) if x)
    rep = ReportEnvelope(name, _config(args))
    t0 = time.perf_counter()
    try:
        args.handler(args, rep)
    except ConfigError as exc:
        print(f"etors {name}: error: {exc}", file=sys.stderr)
        return 2
    rep.timings["total_seconds"] = time.perf_counter() - t0
    text = rep.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
