import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from etors.exact import (FqElement, NumberField, Polynomial, complex_roots, cyclotomic, discriminant,
                         factor, is_irreducible, nf_min_poly, resultant)
from etors.exact.arith import factorint, is_prime, sqrt_mod
from etors.exact.factor import factor_mod_p

P = Polynomial.parse


def test_parse_and_print_roundtrip():
    f = P("3*x^4 - x/2 + 7")
    assert f.coeffs == (7, Fraction(-1, 2), 0, 0, 3)
    assert P(str(f)) == f
    assert P("x**2+x+1") == P("x^2 + x + 1")
    with pytest.raises(ValueError):
        P("x^^2")


def test_roots_of_x2_plus_1():
    roots = complex_roots(P("x^2+1"), 1e-12)
    centers = sorted((b.center.imag for b, _ in roots))
    assert centers == pytest.approx([-1.0, 1.0], abs=1e-14)
    assert all(m == 1 and b.radius <= 1e-12 for b, m in roots)


def test_roots_of_cube_root_two():
    roots = complex_roots(P("x^3-2"), 1e-12)
    real = [b for b, _ in roots if abs(b.center.imag) < 1e-9]
    assert len(real) == 1
    assert 1.2599210 <= real[0].center.real <= 1.2599211
    pair = [b.center for b, _ in roots if abs(b.center.imag) > 1e-9]
    assert abs(pair[0] - pair[1].conjugate()) < 1e-12


def test_repeated_root_multiplicity():
    roots = complex_roots(P("x^2-2x+1"), 1e-12)
    assert len(roots) == 1 and roots[0][1] == 2
    assert abs(roots[0][0].center - 1) <= 1e-12


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        complex_roots(Polynomial(), 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_root_multiplicities_sum_to_degree(coeffs):
    f = Polynomial(coeffs)
    roots = complex_roots(f, 1e-12)
    assert sum(m for _, m in roots) == f.degree
    for i, (a, _) in enumerate(roots):
        assert a.radius <= 1e-12
        for b, _ in roots[i + 1:]:
            assert not a.overlaps(b)
    # residual consistency: |f(center)| is bounded by a derivative bound times the radius
    fp = f.derivative()
    for b, m in roots:
        if m == 1:
            with mpmath.workdps(40):
                val = abs(f.eval_with(b.mid, lambda c: mpmath.mpf(c.numerator) / c.denominator))
                dval = abs(fp.eval_with(b.mid, lambda c: mpmath.mpf(c.numerator) / c.denominator))
            assert val <= 2 * (dval + 1) * max(b.radius, 1e-30) + 1e-25


def test_factor_known_products():
    x = Polynomial.x()
    f = (x**4 - 10 * x**2 + 1) * (x**3 - 2) * (x**2 + x + 1) ** 2
    facs = factor(f)
    assert sorted((g.degree, m) for g, m in facs) == [(2, 2), (3, 1), (4, 1)]
    prod = Polynomial([1])
    for g, m in facs:
        prod = prod * g**m
    assert prod == f.monic()


def test_irreducibility():
    assert is_irreducible(P("x^4-10x^2+1"))
    assert not is_irreducible(P("x^4+4"))  # Sophie Germain
    assert is_irreducible(P("x^48+x^3+7"))
    for n in range(1, 31):
        assert is_irreducible(cyclotomic(n))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda c: c[-1] != 0),
       st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda c: c[-1] != 0))
def test_factor_product_recovers_input(a, b):
    f = Polynomial(a) * Polynomial(b)
    prod = Polynomial([1])
    for g, m in factor(f):
        assert is_irreducible(g)
        prod = prod * g**m
    # factor drops content, compare monic forms
    assert prod == f.monic()


def test_factor_mod_p_product():
    f = P("x^6+x+3").int_coeffs()
    p = 101
    facs = factor_mod_p(f, p)
    from etors.exact import zpoly
    prod = [1]
    for g in facs:
        prod = zpoly.mul_mod(prod, g, p)
    assert prod == zpoly.monic_mod(zpoly.reduce_mod(f, p), p)


def test_resultant_and_discriminant():
    assert discriminant(P("x^2-2")) == 8
    assert discriminant(P("x^3+x+1")) == -31
    assert resultant(P("x^2-2"), P("x-1")) == -1


def test_min_poly_examples():
    K = NumberField(P("x^2-2"))
    t = K.gen()
    assert nf_min_poly(K, K(Fraction(3, 7))) == P("x - 3/7")
    assert nf_min_poly(K, t) == P("x^2-2")
    assert nf_min_poly(K, 1 + t) == P("x^2-2x-1")


def test_min_poly_oracle_multiplication_matrix():
    # oracle: characteristic polynomial of the 2x2 matrix of multiplication by 1 + x
    # [[1, 2], [1, 1]] has trace 2 and determinant -1
    K = NumberField(P("x^2-2"))
    chi = (1 + K.gen()).charpoly()
    assert chi == Polynomial([-1, -2, 1])


def test_min_poly_divides_degree_and_annihilates():
    K = NumberField(P("x^4-10x^2+1"))
    rng = random.Random(7)
    a = K.gen()
    samples = [a * a, (a**3 - 9 * a) / 2, a + 1, K([rng.randint(-3, 3) for _ in range(4)])]
    for e in samples:
        m = nf_min_poly(K, e, verify=True)
        assert K.d % m.degree == 0
        assert m.eval_with(e, K).is_zero()


def test_field_inverse_and_norm():
    K = NumberField(P("x^3-2"))
    e = K([1, 2, -1])
    assert (e * e.inverse()) == K.one()
    assert e.norm() == e.charpoly().coeffs[0] * -1


def test_fq_arithmetic():
    p = 7
    s = FqElement(p, 2, 0, 1)
    assert s * s == FqElement(p, 2, s.eps)
    x = FqElement(p, 2, 3, 5)
    assert x * x.inverse() == FqElement(p, 2, 1)
    assert x ** (p * p - 1) == FqElement(p, 2, 1)
    assert x.frobenius() == x**p


def test_integer_helpers():
    assert factorint(2**4 * 3 * 1000003 * 1000033) == {2: 4, 3: 1, 1000003: 1, 1000033: 1}
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)
    r = sqrt_mod(10, 13)
    assert r * r % 13 == 10
