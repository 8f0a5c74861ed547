import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from etors.exact import Polynomial, cyclotomic, nf_min_poly
from etors.exact.arith import primes_between
from etors.elliptic import (INFINITY, BadReduction, DivisionIndexOutOfRange, PrimeTooSmall, count_points,
                            curve_new, division_polynomial, naive_point_count, reduce_mod, trace_q)
from etors.elliptic.curves import CurveFp, HasseViolation
from etors.elliptic.torsion import sample_field_elements, torsion_field


E51 = curve_new(5, 1)


# -- reduction and counting ---------------------------------------------------

def test_reduction_at_five():
    Ep = reduce_mod(E51, 5)
    assert Ep.coeffs() == (0, 1)
    assert Ep.j_tilde == 0
    assert count_points(Ep) == (6, 0)
    assert naive_point_count(5, 0, 1) == 6


def test_bad_reduction_and_small_primes():
    E = curve_new(1, 1)
    assert E.disc == -16 * 31
    with pytest.raises(BadReduction) as exc:
        reduce_mod(E, 31)
    assert exc.value.p == 31
    with pytest.raises(PrimeTooSmall):
        reduce_mod(E, 3)


def test_j_1728():
    assert curve_new(-1, 0).j == 1728
    assert curve_new(-1, 0).disc == 64


def test_count_against_enumeration():
    n, a7 = count_points(reduce_mod(E51, 7))
    assert n == naive_point_count(7, 5, 1)
    assert (n, a7) == (12, -4)
    assert count_points(reduce_mod(curve_new(-1, 0), 5))[0] == 8 == naive_point_count(5, 4, 0)
    assert trace_q(a7, 7) == 16 - 14


def test_trace_q():
    assert trace_q(0, 5) == -10
    with pytest.raises(PrimeTooSmall):
        trace_q(2, 4)
    with pytest.raises(HasseViolation):
        trace_q(10, 7)


def test_hasse_bound_on_scan():
    for E in (E51, curve_new(-1, 0), curve_new(1, 1), curve_new(-7, 10)):
        for p in primes_between(5, 2000):
            try:
                n, ap = count_points(reduce_mod(E, p))
            except BadReduction:
                continue
            assert ap * ap <= 4 * p
            assert n == p + 1 - ap


def test_small_counts_match_oracle():
    rng = random.Random(5)
    for p in (5, 7, 11, 13, 17, 19, 23):
        for _ in range(5):
            a, b = rng.randrange(p), rng.randrange(p)
            if (4 * a**3 + 27 * b**2) % p == 0:
                continue
            assert count_points(CurveFp(p, a, b))[0] == naive_point_count(p, a, b)
            assert len(CurveFp(p, a, b).points()) == naive_point_count(p, a, b)


# -- group law -----------------------------------------------------------------

def _rational_points(E, count):
    """Multiples of a point of infinite order keep heights modest."""
    P = E.point(3, 5)
    return [E.mul(P, k) for k in range(-count, count + 1)]


def test_scalar_multiplication_examples():
    E = curve_new(0, -2)
    P = E.point(3, 5)
    assert E.mul(P, 1) == P
    assert E.mul(P, 0) == INFINITY
    Q5 = E.mul(P, 5)
    assert E.contains(Q5) and not Q5.is_infinity
    assert E.mul(P, -5) == E.neg(Q5)
    T = curve_new(-1, 0).point(1, 0)
    assert curve_new(-1, 0).mul(T, 2) == INFINITY


def test_group_law_over_Q():
    E = curve_new(0, -2)
    pts = _rational_points(E, 4) + [INFINITY]
    rng = random.Random(11)
    checked = 0
    for _ in range(1000):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert E.add(P, Q) == E.add(Q, P)
        assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))
        checked += 1
    assert checked >= 1000
    P = pts[5]
    for m in range(-10, 11):
        for n in range(-10, 11):
            assert E.mul(P, m + n) == E.add(E.mul(P, m), E.mul(P, n))


def test_group_law_over_Fp():
    rng = random.Random(13)
    checked = 0
    for p in (5, 7, 31, 101, 257):
        a, b = rng.randrange(p), rng.randrange(p)
        while (4 * a**3 + 27 * b**2) % p == 0:
            a, b = rng.randrange(p), rng.randrange(p)
        Ep = CurveFp(p, a, b)
        pts = Ep.points()
        for _ in range(250):
            P, Q, R = (rng.choice(pts) for _ in range(3))
            assert Ep.add(P, Q) == Ep.add(Q, P)
            assert Ep.add(Ep.add(P, Q), R) == Ep.add(P, Ep.add(Q, R))
            checked += 1
        order = len(pts)
        for P in pts[:10]:
            assert Ep.mul(P, order) == INFINITY
            for m in range(-10, 11, 3):
                for n in range(-10, 11, 4):
                    assert Ep.mul(P, m + n) == Ep.add(Ep.mul(P, m), Ep.mul(P, n))
    assert checked >= 1000


@settings(max_examples=60, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 10**6))
def test_group_law_random_curves_mod_p(a, b, seed):
    p = 1009
    if (4 * a**3 + 27 * b**2) % p == 0:
        return
    Ep = CurveFp(p, a % p, b % p)
    pts = Ep.points()
    rng = random.Random(seed)
    P, Q, R = (rng.choice(pts) for _ in range(3))
    assert Ep.add(Ep.add(P, Q), R) == Ep.add(P, Ep.add(Q, R))
    assert Ep.contains(Ep.add(P, Q))


# -- division polynomials -------------------------------------------------------

def _duplication_oracle(a, b):
    """Numerator of x([2]T) - x(T) with y^2 = x^3 + a x + b substituted; its roots are 3-torsion abscissae."""
    x = Polynomial.x()
    cubic = x**3 + a * x + b
    # x(2T) = ((3x^2 + a)^2 - 8 x cubic) / (4 cubic); x(2T) = x(T) iff 2T = -T
    return (3 * x**2 + a) ** 2 - 8 * x * cubic - 4 * x * cubic


def test_three_division_polynomial_formula():
    for a, b in [(5, 1), (-1, 0), (2, 3), (Fraction(1, 2), -7)]:
        E = curve_new(a, b)
        psi3 = division_polynomial(E, 3)
        x = Polynomial.x()
        assert psi3 == 3 * x**4 + 6 * a * x**2 + 12 * b * x - Fraction(a) ** 2
        assert psi3.monic() == (-_duplication_oracle(a, b)).monic()


def test_division_polynomial_degrees_and_cases():
    E = E51
    x = Polynomial.x()
    assert division_polynomial(E, 2) == x**3 + 5 * x + 1
    assert division_polynomial(E, 5).degree == 12
    for N in range(2, 13):
        full = division_polynomial(E, N)
        assert full.degree == ((N * N - 1) // 2 if N % 2 else (N * N + 2) // 2)
    with pytest.raises(DivisionIndexOutOfRange):
        division_polynomial(E, 13)
    with pytest.raises(DivisionIndexOutOfRange):
        division_polynomial(E, 1)


def test_division_polynomial_divisibility():
    for E in (E51, curve_new(-1, 0), curve_new(2, 3)):
        for N in range(2, 7):
            for k in range(1, 12 // N + 1):
                assert division_polynomial(E, k * N) % division_polynomial(E, N) == Polynomial()


def test_primitive_division_polynomial_counts_exact_order():
    E = curve_new(2, 3)
    # points of exact order N come in +/- pairs: (N^2 * prod(1 - 1/l^2) ) / 2
    expected = {2: 3, 3: 4, 4: 6, 5: 12, 6: 12, 7: 24, 8: 24, 9: 36, 10: 36, 11: 60, 12: 48}
    for N, deg in expected.items():
        assert division_polynomial(E, N, primitive=True).degree == deg


def test_division_polynomial_roots_are_torsion_mod_p():
    # over F_p: every point whose x is a root of psi_N has N P = O
    p = 101
    E = E51
    Ep = reduce_mod(E, p)
    for N in (3, 4, 5):
        psi = division_polynomial(E, N)
        for P in Ep.points()[1:]:
            xv = P.x.a
            val = sum(int(c.numerator * pow(c.denominator, -1, p)) * pow(xv, i, p) for i, c in enumerate(psi.coeffs)) % p
            assert (val == 0) == (Ep.mul(P, N) == INFINITY)


# -- torsion fields --------------------------------------------------------------

def _check_handle(h):
    E = h.curve
    for x, y in h.points.values():
        assert (y * y - (x * x * x + x * E.a + E.b)).is_zero()
    assert cyclotomic(h.N).eval_with(h.zeta, h.K).is_zero()
    assert len(h.points) == h.N**2 - 1


def test_two_torsion_of_x3_minus_x_is_rational():
    h = torsion_field(curve_new(-1, 0), 2)
    assert h.degree == 1
    xs = sorted(x.coords[0] for x, _ in h.points.values())
    assert xs == [-1, 0, 1]
    _check_handle(h)


def test_two_torsion_splitting_field_degree_six():
    h = torsion_field(E51, 2)
    assert h.degree == 6
    # independent check: cubic irreducible, discriminant -16*(4*125 + 27) is not a square
    disc = -4 * 5**3 - 27
    assert disc < 0
    _check_handle(h)


def test_three_torsion_contains_cube_roots_of_unity():
    for E in (curve_new(-1, 0), curve_new(0, 1), curve_new(-2, 1)):
        h = torsion_field(E, 3)
        z = h.zeta
        assert (z * z + z + 1).is_zero()
        _check_handle(h)
        assert h.degree == len(h.galois)


def test_four_torsion_of_cm_curve():
    h = torsion_field(curve_new(-1, 0), 4)
    assert h.degree == 4  # Q(i, sqrt 2)
    assert (h.zeta * h.zeta + 1).is_zero()
    _check_handle(h)


def test_torsion_degree_cap():
    from etors.exact import DegreeCapExceeded
    with pytest.raises(DegreeCapExceeded):
        torsion_field(E51, 3, degree_cap=20)
    with pytest.raises(ValueError):
        torsion_field(E51, 6)


def test_sample_field_elements():
    h = torsion_field(E51, 2)
    assert sample_field_elements(h, 0, 1) == []
    a = sample_field_elements(h, 200, 7)
    b = sample_field_elements(h, 200, 7)
    assert a == b and len(a) == 200
    assert all(not e.is_zero() for e in a)
    for e in a:
        f = nf_min_poly(h.K, e)
        assert 1 <= f.degree <= 6 and 6 % f.degree == 0
