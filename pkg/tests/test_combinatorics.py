"""Class counts, log-factorial modes, and the repartition value."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from gen3x1 import R_MODES, eta, log_factorial, repartition


def test_eta_small_values():
    assert eta(3, 0, 0) == 1
    assert eta(3, 1, 0) == 2
    assert eta(3, 0, 1) == 1
    assert eta(3, 3, 2) == 80  # the enumerated class listing has 80 rows
    assert eta(3, 5, 0) == 32
    assert eta(2, 3, 4) == math.comb(7, 4)


def test_eta_sums_to_window_size():
    for d in (2, 3, 5):
        for k in range(1, 13):
            assert sum(eta(d, k1, k - k1) for k1 in range(k + 1)) == d**k


@settings(max_examples=200, deadline=None)
@given(d=st.integers(2, 6), k1=st.integers(1, 40), k2=st.integers(1, 40))
def test_eta_pascal_recurrence(d, k1, k2):
    assert eta(d, k1, k2) == (d - 1) * eta(d, k1 - 1, k2) + eta(d, k1, k2 - 1)


def test_eta_rejects_bad_split():
    with pytest.raises(ValueError):
        eta(1, 1, 1)
    with pytest.raises(ValueError):
        eta(3, -1, 2)


def test_log_factorial_exact_oracle():
    with mp.workdps(50):
        v = log_factorial(11, "exact")
        assert abs(v - mp.log(39916800)) < mp.mpf("1e-45")
        assert abs(float(v) - 17.502307845873887) < 1e-12


def test_log_factorial_zero_and_one():
    for mode in R_MODES:
        assert log_factorial(0, mode) == 0
    assert log_factorial(1, "exact") == 0


def test_stirling_and_ramanujan_accuracy():
    with mp.workdps(50):
        exact = log_factorial(11, "exact")
        stirling = log_factorial(11, "stirling")
        ramanujan = log_factorial(11, "ramanujan")
        # Stirling misses by ~1/(12n); Ramanujan is far tighter
        assert abs(stirling - exact) < mp.mpf("0.0076")
        assert stirling < exact
        assert abs(ramanujan - exact) < mp.mpf("1e-5")
        assert abs(ramanujan - exact) < abs(stirling - exact) / 100


def test_exact_mode_large_n_uses_loggamma_consistently():
    with mp.workdps(30):
        near = log_factorial(10_000, "exact")
        above = log_factorial(10_001, "exact")
        # ln (n+1)! - ln n! = ln(n+1) across the engine switch
        assert abs((above - near) - mp.log(10_001)) < mp.mpf("1e-24")


def test_log_factorial_bounds_and_modes():
    with pytest.raises(ValueError):
        log_factorial(-1)
    with pytest.raises(ValueError):
        log_factorial(5, "banana")
    with pytest.raises(ValueError):
        log_factorial(10**6 + 1, "exact")


def test_repartition_exact_small():
    val = repartition(3, 3, 2, "exact")
    assert val.mode == "exact"
    assert val.eta == 80
    with mp.workdps(50):
        # ln R = ln(3^5 / (80 + 1)) = ln 3 exactly
        assert abs(val.ln_R - mp.log(3)) < mp.mpf("1e-45")


def test_repartition_modes_close_for_large_k():
    exact = repartition(3, 1200, 800, "exact").ln_R
    stirling = repartition(3, 1200, 800, "stirling").ln_R
    ramanujan = repartition(3, 1200, 800, "ramanujan").ln_R
    assert abs(float(exact - ramanujan)) < 1e-3
    assert abs(float(exact - stirling)) < 0.01


def test_repartition_rejects_unknown_mode():
    with pytest.raises(ValueError):
        repartition(3, 2, 1, "fast")
