import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etors.elliptic import curve_new
from etors.equidist import (NonConvergentQuadrature, bilu_discrepancy, choose_m, circle_integral, clip_arc,
                            f_m_circle_integral, f_m_circle_integral_exact, f_m_eval, f_m_values,
                            log_abs_minus_one, suz_fiber_demo)
from etors.prime_select import gap_constants


def test_f_m_examples():
    assert f_m_eval(1, 1) == -1
    assert f_m_eval(1 + math.e, 1) == pytest.approx(1, abs=1e-15)
    assert f_m_eval(2, 1) == 0
    assert f_m_eval(100, 2) == 2
    with pytest.raises(ValueError):
        f_m_eval(0, 1)


@settings(max_examples=300, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50), st.integers(1, 10))
def test_f_m_bounded_and_matches_log_on_band(x, y, m):
    z = complex(x, y)
    if z == 0:
        return
    v = f_m_eval(z, m)
    assert -m <= v <= m
    if z != 1:
        r = abs(z - 1)
        if math.exp(-m) <= r <= math.exp(m):
            assert v == pytest.approx(math.log(r), abs=1e-12)
    assert f_m_values(np.array([z]), m)[0] == pytest.approx(v, abs=1e-12)


def test_jensen():
    r = circle_integral(log_abs_minus_one, 1e-6)
    assert abs(r.value) < 1e-6


def test_constant_integrand():
    assert circle_integral(lambda z: 3.0).value == pytest.approx(3.0, abs=1e-15)


def test_f_m_integral_against_closed_form():
    values = []
    for m in range(1, 9):
        quad = f_m_circle_integral(m)
        exact = f_m_circle_integral_exact(m)
        assert abs(quad.value - exact) < 1e-8
        values.append(exact)
    # positive (the clipped arc lifts f_m above log|z - 1|) and decreasing to 0
    assert all(v > 0 for v in values)
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-3


def test_clip_arc():
    for m in (1, 3, 8):
        s = clip_arc(m)
        assert abs(2 * math.sin(math.pi * s) - math.exp(-m)) < 1e-15


def test_choose_m_values():
    consts = gap_constants(5)
    assert choose_m(consts.unramified).m == 5
    assert choose_m(consts.ramified).m == 15
    big = choose_m(4.0)
    assert big.m == 1 and big.satisfied()
    with pytest.raises(ValueError):
        choose_m(0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, 10), st.floats(0.01, 1))
def test_choose_m_monotone_and_valid(c, shrink):
    hi, lo = choose_m(c), choose_m(c * shrink)
    assert hi.satisfied() and lo.satisfied()
    assert lo.m >= hi.m
    if hi.m > 1:
        prev_int = f_m_circle_integral_exact(hi.m - 1)
        prev_log = math.log1p(2 * math.exp(-(hi.m - 1)))
        assert not (prev_int < c / 2 and prev_log <= c / 2)


def test_bilu_trend():
    d = [bilu_discrepancy(f"x^{n}-2", 1) for n in (50, 100, 200)]
    assert d[0].discrepancy > d[1].discrepancy > d[2].discrepancy
    assert d[2].discrepancy < 0.05
    assert [r.count for r in d] == [50, 100, 200]
    assert d[2].height == pytest.approx(math.log(2) / 200, abs=1e-10)


def test_bilu_degenerate_cases():
    r = bilu_discrepancy("x-2", 1)
    assert r.discrepancy == pytest.approx(abs(f_m_eval(2, 1) - f_m_circle_integral_exact(1)), abs=1e-12)
    r = bilu_discrepancy("x^2-x-1", 1)
    assert r.count == 2 and r.applicable and r.discrepancy > 0
    r = bilu_discrepancy("x^2+x+1", 1)
    assert not r.applicable


def test_suz_fibers():
    reps = suz_fiber_demo(curve_new(0, -2), (3, 5), 6, 16)
    assert reps[0].points == 1 and reps[4].points == 256
    chi = [r.chi_square for r in reps]
    assert chi[0] == max(chi)
    assert all(a >= b for a, b in zip(chi, chi[1:]))
    assert chi[4] < 1e-12
    assert all(r.check_residual < 1e-8 for r in reps[1:])
    assert sum(map(sum, reps[3].histogram)) == 64
    assert reps[2].csv().count("\n") == 4


def test_suz_rejects_bad_input():
    with pytest.raises(ValueError):
        suz_fiber_demo(curve_new(0, -2), (3, 5), 9, 16)
    with pytest.raises(ValueError):
        suz_fiber_demo(curve_new(0, -2), (3, 5), 2, 10)


def test_nonconvergence_reported():
    with pytest.raises(NonConvergentQuadrature):
        circle_integral(lambda z: 1.0 / abs(z - 1), 1e-8)
