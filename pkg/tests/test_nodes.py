"""Factor systems, the record-product walk, precision escalation, transitions."""
from fractions import Fraction

import pytest
from mpmath import mp

from gen3x1 import (
    COLLATZ_FACTORS,
    ORIGINAL_COLLATZ,
    THREE_X1_FACTORS,
    THREE_X_PLUS_ONE,
    FactorSystem,
    PrecisionCapError,
    PrecisionConfig,
    UnsupportedMappingError,
    carnielli_t,
    classify_transition,
    condition_C,
    delta_from_exponents,
    delta_lambda_series,
    factor_system_for,
    gap_analysis,
    ln_lambda,
    run_nodes,
    rs_exponent,
)
from gen3x1.mappings import BranchRule, MappingSpec


def test_factor_systems_for_presets():
    g = factor_system_for(ORIGINAL_COLLATZ)
    assert (g.below, g.above, g.base, g.constant) == (
        Fraction(2, 3), Fraction(4, 3), 3, Fraction(7, 24))
    t = factor_system_for(THREE_X_PLUS_ONE)
    assert (t.below, t.above, t.base, t.constant) == (
        Fraction(1, 2), Fraction(3, 2), 2, Fraction(5, 12))
    assert g == COLLATZ_FACTORS and t == THREE_X1_FACTORS


def test_factor_system_needs_constant_for_new_mappings():
    with pytest.raises(UnsupportedMappingError):
        factor_system_for(carnielli_t(4))
    fs = factor_system_for(carnielli_t(4), par=Fraction(1, 3))
    assert fs.constant == Fraction(1, 3)
    assert (fs.below, fs.above) == (Fraction(1, 4), Fraction(5, 4))


def test_factor_system_rejects_degenerate_shapes():
    # three distinct branch factors
    spec = MappingSpec(d=4, branches=(
        BranchRule(0, 1, 0), BranchRule(1, 2, 2), BranchRule(2, 2, 0), BranchRule(3, 5, 3)))
    with pytest.raises(UnsupportedMappingError):
        factor_system_for(spec)
    with pytest.raises(ValueError):
        FactorSystem(below=Fraction(3, 2), above=Fraction(2), base=3, constant=Fraction(1))
    with pytest.raises(ValueError):
        FactorSystem(below=Fraction(1, 2), above=Fraction(2), base=1, constant=Fraction(1))


def test_precision_config_validation():
    with pytest.raises(ValueError):
        PrecisionConfig(decimal_digits=10)
    with pytest.raises(ValueError):
        PrecisionConfig(decimal_digits=50, max_digits=40)


def test_walk_seeds_and_first_products():
    run = run_nodes(COLLATZ_FACTORS, PrecisionConfig(50), max_main=3)
    seeds = [r for r in run.records if r.is_seed]
    assert [(s.side, s.k1, s.k2) for s in seeds] == [("PP", 0, 1), ("PG", 1, 0)]
    with mp.workdps(50):
        third = mp.mpf(1) / 3
        assert abs(seeds[0].delta - third) < mp.mpf("1e-48")
        assert abs(seeds[1].delta - third) < mp.mpf("1e-48")

        # products: 1/9 on PP, then 5/27 and 13/243 on PG
        p1 = run.record(2, 1)
        assert (p1.side, p1.k1, p1.k2) == ("PP", 1, 1)
        assert abs(p1.delta - mp.mpf(1) / 9) < mp.mpf("1e-48")
        p2 = run.record(3, 1)
        assert (p2.side, p2.k1, p2.k2) == ("PG", 2, 1)
        assert abs(p2.delta - mp.mpf(5) / 27) < mp.mpf("1e-48")
        p3 = run.record(3, 2)
        assert (p3.side, p3.k1, p3.k2) == ("PG", 3, 2)
        assert abs(p3.delta - mp.mpf(13) / 243) < mp.mpf("1e-48")


def test_walk_exponents_always_sum():
    run = run_nodes(COLLATZ_FACTORS, PrecisionConfig(50), max_main=8)
    for rec in run.products:
        assert rec.k == rec.k1 + rec.k2


def test_record_lookup():
    run = run_nodes(COLLATZ_FACTORS, PrecisionConfig(50), max_main=3)
    assert run.record(3, 1).side == "PG"
    with pytest.raises(KeyError):
        run.record(3, 9)


def test_deltas_match_independent_recomputation():
    """Walk deltas against the expm1 path from the exact exponent pairs."""
    run = run_nodes(COLLATZ_FACTORS, PrecisionConfig(50), max_main=10)
    with mp.workdps(50):
        for rec in run.products:
            oracle = delta_from_exponents(COLLATZ_FACTORS, rec.k1, rec.k2, 50)
            # walk rounding accumulates absolutely (ulp of the early deltas),
            # far below the 28-decimal rendering contract
            assert abs(rec.delta - oracle) <= mp.mpf("1e-45")


def test_escalated_walk_matches_high_precision_walk():
    lo = run_nodes(COLLATZ_FACTORS, PrecisionConfig(20), max_main=13)
    hi = run_nodes(COLLATZ_FACTORS, PrecisionConfig(50), max_main=13)
    assert [(r.main, r.secondary, r.side, r.k1, r.k2) for r in lo.products] == \
           [(r.main, r.secondary, r.side, r.k1, r.k2) for r in hi.products]


def test_precision_cap_raises():
    with pytest.raises(PrecisionCapError):
        run_nodes(COLLATZ_FACTORS, PrecisionConfig(20, escalate=True, max_digits=20),
                  max_main=30, max_k=10**13)


def test_ln_lambda_sign_and_value():
    with mp.workdps(50):
        v = ln_lambda(COLLATZ_FACTORS, 1, 1, 50)
        assert abs(v - mp.log(mp.mpf(8) / 9)) < mp.mpf("1e-48")
        assert v < 0
        assert ln_lambda(COLLATZ_FACTORS, 2, 1, 50) > 0


def test_condition_C_oracle():
    # fixed point through the expanding branch: C = (7/24) / ln(4/3)
    with mp.workdps(50):
        bound = condition_C(1, ln_lambda(COLLATZ_FACTORS, 1, 0, 50), Fraction(7, 24), 50)
        assert abs(bound.C - mp.mpf("1.013850687")) < mp.mpf("1e-8")
        assert abs(mp.exp(bound.ln_C) - bound.C) < mp.mpf("1e-40")
    with pytest.raises(ValueError):
        condition_C(0, mp.mpf(1), Fraction(7, 24))
    with pytest.raises(ValueError):
        condition_C(3, mp.mpf(0), Fraction(7, 24))


def test_series_matches_direct_log():
    with mp.workdps(50):
        d_pp, d_pg = mp.mpf("1e-3"), mp.mpf("2e-3")
        series = delta_lambda_series(d_pp, d_pg, order=15)
        direct = mp.log((1 + d_pg) * (1 - d_pp))
        assert abs(series - direct) < mp.mpf("1e-44")
    with pytest.raises(ValueError):
        delta_lambda_series(d_pp, d_pg, order=0)


def test_rs_exponent():
    with mp.workdps(50):
        assert abs(rs_exponent(mp.mpf(1) / 9, 3) - 2) < mp.mpf("1e-47")
        assert abs(rs_exponent(mp.mpf(1) / 32, 2) - 5) < mp.mpf("1e-47")
    with pytest.raises(ValueError):
        rs_exponent(mp.mpf(2), 3)


def test_classify_transition_cases():
    with mp.workdps(50):
        with pytest.raises(ValueError):
            classify_transition(mp.mpf(1) / 3, mp.mpf(1) / 3)

        # from (1/9, 1/3): product lands between -> regular, on the PG side
        t = classify_transition(mp.mpf(1) / 9, mp.mpf(1) / 3)
        assert t.case == "regular-PG"
        assert t.predicted_t_relation == "s < t < r"
        assert t.s < t.t < t.r

        # nearly equal small deltas -> the new delta undercuts both
        t = classify_transition(mp.mpf("1e-4"), mp.mpf("1.05e-4"))
        assert t.case == "preswitch-PG"
        assert t.predicted_t_relation == "t > r > s"
        assert t.t > t.r > t.s

        t = classify_transition(mp.mpf("1.05e-4"), mp.mpf("1e-4"))
        assert t.case == "preswitch-PP"
        assert t.predicted_t_relation == "t > s > r"
        assert t.t > t.s > t.r


def test_gap_analysis_shapes():
    with mp.workdps(50):
        ln_up = mp.log(mp.mpf(4) / 3)
        out = gap_analysis(mp.mpf(1), mp.mpf(1) + ln_up, COLLATZ_FACTORS)
        assert out.n_k1 == 1
        assert out.total == out.n_k1 + out.n_k2
        with pytest.raises(ValueError):
            gap_analysis(mp.mpf(2), mp.mpf(1), COLLATZ_FACTORS)


def test_run_nodes_argument_validation():
    with pytest.raises(ValueError):
        run_nodes(COLLATZ_FACTORS, max_main=0)
    with pytest.raises(ValueError):
        run_nodes(COLLATZ_FACTORS, max_k=0)
    with pytest.raises(ValueError):
        run_nodes(COLLATZ_FACTORS, r_mode="banana")


def test_max_k_cuts_the_walk():
    run = run_nodes(COLLATZ_FACTORS, PrecisionConfig(50), max_main=9, max_k=100)
    assert run.products[-1].k >= 100
    assert all(r.k < 100 for r in run.products[:-1])
