import math

import pytest

from etors.elliptic import curve_new, trace_q
from etors.prime_select import (NotFoundBelowBound, P2Status, check_P1, check_P2, empirical_gap_scan,
                                find_admissible_prime, gap_constants)

E51 = curve_new(5, 1)
# short model of 11a1, which has a rational point of order 5
E11 = curve_new(-13392, -1080432)


@pytest.fixture(scope="module")
def cert():
    return find_admissible_prime(E51, 1000)


def test_p1_at_five_is_supersingular_with_j_zero():
    r = check_P1(E51, 5)
    assert r.a_p == 0 and r.j_tilde == 0
    assert not r  # j~ = 0 is excluded by P1
    assert trace_q(r.a_p, 5) == -10


def test_p1_bad_reduction_is_false_not_raise():
    r = check_P1(curve_new(1, 1), 31)
    assert not r and "bad reduction" in r.reason


def test_p1_j_zero_curve_never_holds():
    E = curve_new(0, 1)
    for p in (5, 11, 17, 23, 29, 41, 47):
        assert not check_P1(E, p)


def test_p1_implies_a_q_minus_2p():
    for p in range(5, 400):
        try:
            r = check_P1(E51, p)
        except ValueError:
            continue
        if r:
            assert trace_q(r.a_p, p) == -2 * p


def test_p2_inconclusive_for_cm_and_isogeny():
    assert check_P2(curve_new(-1, 0), 5).status is P2Status.INCONCLUSIVE
    res = check_P2(E11, 5, 2000)
    assert res.status is P2Status.INCONCLUSIVE
    assert all("borel" not in w["rules_out"] for w in res.evidence)


def test_certificate(cert):
    assert cert.p == 131
    assert cert.a_p == 0 and cert.a_q == -262 and cert.q == 131**2
    assert cert.j_tilde not in (0, 1728 % 131)
    assert cert.P2 is P2Status.VERIFIED
    ruled = {c for w in cert.evidence for c in w["rules_out"]}
    assert ruled == {"borel", "split_cartan_normalizer", "nonsplit_cartan_normalizer", "exceptional"}
    d = cert.to_dict()
    assert set(d) == {"p", "q", "a_p", "a_q", "j_tilde", "P1", "P2", "evidence"}


def test_find_is_monotone_in_p_max(cert):
    assert find_admissible_prime(E51, 131).to_dict() == cert.to_dict()
    assert find_admissible_prime(E51, 5000).to_dict() == cert.to_dict()
    with pytest.raises(NotFoundBelowBound):
        find_admissible_prime(E51, 130)


def test_not_found_cases():
    with pytest.raises(NotFoundBelowBound):
        find_admissible_prime(curve_new(-1, 0), 200)
    with pytest.raises(NotFoundBelowBound) as exc:
        find_admissible_prime(E51, 3)
    assert exc.value.p_max == 3


def test_gap_constants_at_five():
    g = gap_constants(5)
    assert g.unramified == pytest.approx(math.log(2.5) / 26, abs=1e-15)
    assert abs(g.unramified - 0.0352420) < 1e-7
    assert g.ramified == pytest.approx(math.log(5) / 781250, rel=1e-15)
    assert 2 * 5**8 == 781250
    assert (g.Q(1), g.Q(2), g.Q(7)) == (600, 25, 25)


def test_gap_constants_decrease():
    vals = [gap_constants(p).unramified for p in (5, 7, 11, 13)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))
    assert all(gap_constants(p).ramified > 0 for p in (5, 7, 11, 13))


def test_gap_scan_over_rationals(cert):
    r = empirical_gap_scan(E51, cert, 1, 200, 3)
    assert r.scanned == 200 and not r.violations
    assert r.min_height == pytest.approx(math.log(2), abs=1e-12)


def test_gap_scan_two_torsion(cert):
    r = empirical_gap_scan(E51, cert, 2, 200, 7)
    assert r.degree == 6 and r.scanned == 200
    assert r.violations == []
    assert r.excluded_roots_of_unity > 0  # -1 is drawn and skipped, never flagged
    again = empirical_gap_scan(E51, cert, 2, 200, 7)
    assert again.to_dict() == r.to_dict()


def test_gap_scan_needs_coprime_level():
    with pytest.raises(ValueError):
        empirical_gap_scan(E51, 5, 5, 10, 1)
