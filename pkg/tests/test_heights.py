import math

import pytest

from etors.exact import NumberField, Polynomial, nf_min_poly
from etors.heights import (AlgebraicNumber, NotAlgebraicNumberInput, height, height_identity_suite, inverse,
                           is_root_of_unity, power, product, root_of_unity, sample_algebraic_numbers, weil_height)


def alg(s, **kw):
    return AlgebraicNumber.from_minpoly(s, **kw)


def test_cube_root_of_two():
    prof = weil_height(alg("x^3-2"))
    assert prof.h == pytest.approx(math.log(2) / 3, abs=1e-12)
    assert abs(prof.h - 0.2310490) < 1e-7
    assert prof.error_bound <= 1e-10


def test_fifth_root_of_unity_has_height_zero():
    assert weil_height(alg("x^4+x^3+x^2+x+1")).h == pytest.approx(0, abs=1e-14)


def test_golden_ratio_height():
    # direct Mahler measure: only (1 + sqrt5)/2 lies outside the unit circle
    expected = 0.5 * math.log((1 + math.sqrt(5)) / 2)
    assert weil_height(alg("x^2-x-1")).h == pytest.approx(expected, abs=1e-13)
    assert abs(expected - 0.2406059) < 1e-7


def test_profile_decomposition():
    prof = weil_height(alg("3x^3-x+5"))
    assert prof.h == pytest.approx(prof.finite_aggregate + sum(prof.archimedean) / prof.degree, abs=1e-14)
    assert prof.finite_aggregate == pytest.approx(math.log(3) / 3)


def test_rational_finite_places():
    prof = weil_height(AlgebraicNumber.rational("12/5"))
    assert prof.h == pytest.approx(math.log(12))
    assert prof.finite_places[5] == pytest.approx(math.log(5))
    assert prof.finite_places[2] == 0.0


def test_reducible_or_imprimitive_rejected():
    with pytest.raises(NotAlgebraicNumberInput):
        alg("x^2-1")
    with pytest.raises(NotAlgebraicNumberInput):
        AlgebraicNumber(Polynomial([-4, 0, 2]), alg("x^2-2").root)


def test_root_of_unity_orders():
    assert is_root_of_unity(alg("x-1")) == 1
    assert is_root_of_unity(alg("x^2+x+1")) == 3
    assert is_root_of_unity(alg("x^2-2")) is None
    for n in range(1, 31):
        z = root_of_unity(n)
        assert is_root_of_unity(z) == n
        assert height(z) == pytest.approx(0, abs=1e-12)


def test_identity_suite_exact_power():
    s2 = alg("x^2-2")
    checks = {c.name: c for c in height_identity_suite(s2, s2, 2)}
    sub = checks["submultiplicativity h(ab) <= h(a)+h(b)"]
    assert sub.lhs == pytest.approx(math.log(2)) and sub.slack == pytest.approx(0, abs=1e-12)
    assert all(c.passed for c in checks.values())


def test_identity_suite_inverse_of_two():
    checks = height_identity_suite(AlgebraicNumber.rational(2), alg("x^2-2"), -1)
    hom = [c for c in checks if c.name.startswith("homogeneity")][0]
    assert hom.lhs == pytest.approx(math.log(2), abs=1e-12)
    assert all(c.passed for c in checks)


def test_identity_suite_random_degree_four_pair():
    pool = [a for a in sample_algebraic_numbers(40, seed=2024, max_degree=4) if a.degree == 4]
    a, b = pool[0], pool[1]
    checks = height_identity_suite(a, b, 3)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_product_matches_number_field_route():
    # oracle: the same product computed in Q(sqrt2, sqrt3) with nf_min_poly
    K = NumberField(Polynomial.parse("x^4-10x^2+1"))
    t = K.gen()
    s2 = (t**3 - 9 * t) / 2
    s3 = t - s2
    e = (1 + s2) * (2 + s3)
    m = nf_min_poly(K, e)
    a = alg("x^2-2x-1", near=1 + math.sqrt(2))
    b = alg("x^2-4x+1", near=2 + math.sqrt(3))
    ab = product(a, b)
    assert ab.minpoly == m.primitive()


def test_heights_invariants_on_corpus():
    corpus = sample_algebraic_numbers(100, seed=11, max_degree=6)
    for a in corpus:
        h = height(a)
        assert h > 0
        assert height(inverse(a)) == pytest.approx(h, abs=1e-10)
        for k in range(-5, 6):
            assert height(power(a, k)) == pytest.approx(abs(k) * h, abs=1e-9)


def test_homogeneity_full_range_small_corpus():
    for a in sample_algebraic_numbers(12, seed=5, max_degree=3):
        h = height(a)
        for k in range(-5, 6):
            assert height(power(a, k)) == pytest.approx(abs(k) * h, abs=1e-9)


def test_root_of_unity_twist_invariance():
    for a in sample_algebraic_numbers(6, seed=9, max_degree=3):
        for n in (3, 4, 5, 8, 12):
            z = root_of_unity(n)
            if a.degree * z.degree <= 24:
                assert height(product(a, z)) == pytest.approx(height(a), abs=1e-9)


def test_kronecker_equivalence_on_corpus():
    corpus = sample_algebraic_numbers(60, seed=3, max_degree=4, exclude_roots_of_unity=False)
    corpus += [root_of_unity(n) for n in (1, 2, 6, 7, 9, 10)]
    for a in corpus:
        zero = height(a) < 1e-12
        assert zero == (is_root_of_unity(a) is not None or a.is_zero())
