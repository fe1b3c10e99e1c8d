"""Exact iteration, symbol words, affine forms, presets, serialization."""
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen3x1 import (
    ORIGINAL_COLLATZ,
    THREE_X_PLUS_ONE,
    BranchRule,
    MappingError,
    MappingSpec,
    affine_form,
    apply_map,
    carnielli_l,
    carnielli_t,
    is_permutation,
    iterate,
    mapping_from_json,
    mapping_to_dict,
    residue_for_symbol,
    symbol_for_residue,
    symbol_sequence,
)


def test_collatz_small_orbit():
    assert apply_map(ORIGINAL_COLLATZ, 0) == 0
    assert apply_map(ORIGINAL_COLLATZ, 1) == 1
    assert apply_map(ORIGINAL_COLLATZ, 2) == 3
    assert apply_map(ORIGINAL_COLLATZ, 3) == 2
    orbit = iterate(ORIGINAL_COLLATZ, 4, 5)
    assert orbit.values == (4, 5, 7, 9, 6, 4)
    assert orbit.symbols.entries == (-1, 1, -1, 0, 0)
    assert orbit.symbols.k1 == 3 and orbit.symbols.k2 == 2


def test_3x1_small_orbit():
    assert apply_map(THREE_X_PLUS_ONE, 1) == 2
    assert apply_map(THREE_X_PLUS_ONE, 2) == 1
    assert apply_map(THREE_X_PLUS_ONE, -1) == -1
    orbit = iterate(THREE_X_PLUS_ONE, -5, 3)
    assert orbit.values == (-5, -7, -10, -5)


def test_negative_arguments_use_nonnegative_residues():
    # -1 = 3*(-1) + 2, so the residue-2 branch applies
    assert apply_map(ORIGINAL_COLLATZ, -1) == -1
    assert apply_map(ORIGINAL_COLLATZ, -2) == -3
    assert apply_map(ORIGINAL_COLLATZ, -4) == -5


def test_iterate_shapes():
    traj = iterate(ORIGINAL_COLLATZ, 7, 4)
    assert traj.start == 7
    assert len(traj.values) == 5
    assert traj.k == 4
    assert traj.symbols.k == 4
    assert iterate(ORIGINAL_COLLATZ, 7, 0).values == (7,)


def test_symbol_alphabet():
    assert [symbol_for_residue(3, r) for r in range(3)] == [0, -1, 1]
    for r in range(3):
        assert residue_for_symbol(3, symbol_for_residue(3, r)) == r
    # other moduli keep plain residues
    assert [symbol_for_residue(5, r) for r in range(5)] == [0, 1, 2, 3, 4]


def test_symbol_sequence_matches_iterate():
    seq = symbol_sequence(ORIGINAL_COLLATZ, 2, 5)
    assert seq.entries == (1, 0, 1, 0, 1)
    assert (seq.k1, seq.k2) == (3, 2)


@settings(max_examples=200, deadline=None)
@given(
    n=st.integers(-10**9, 10**9),
    k=st.integers(0, 20),
    which=st.sampled_from(["g", "t"]),
)
def test_affine_form_equals_iteration(n, k, which):
    spec = ORIGINAL_COLLATZ if which == "g" else THREE_X_PLUS_ONE
    form = affine_form(spec, n, k)
    traj = iterate(spec, n, k)
    assert form.evaluate(n) == traj.values[-1]
    assert form.lam.denominator >= 1  # exact rational, never a float
    assert (form.k1, form.k2) == (traj.symbols.k1, traj.symbols.k2)


def test_affine_form_coefficients_are_products():
    form = affine_form(ORIGINAL_COLLATZ, 4, 5)
    assert form.lam == Fraction(4, 3) ** 3 * Fraction(2, 3) ** 2
    assert form.evaluate(4) == 4


def test_carnielli_families():
    t4 = carnielli_t(4)
    assert t4.d == 4
    assert t4.multipliers == (1, 5, 5, 5)
    for n in range(-50, 50):
        assert isinstance(apply_map(t4, n), int)
    l4 = carnielli_l(4)
    for n in range(-50, 50):
        assert isinstance(apply_map(l4, n), int)
    with pytest.raises(MappingError):
        carnielli_t(1)


def test_permutation_detection():
    assert is_permutation(ORIGINAL_COLLATZ) is True
    assert is_permutation(THREE_X_PLUS_ONE) is False


def test_round_trip_serialization():
    for spec in (ORIGINAL_COLLATZ, THREE_X_PLUS_ONE, carnielli_t(5), carnielli_l(5)):
        text = json.dumps(mapping_to_dict(spec))
        again = mapping_from_json(text)
        assert again.d == spec.d
        assert again.branches == spec.branches


def test_malformed_mappings_rejected():
    with pytest.raises(MappingError):
        MappingSpec(d=1, branches=(BranchRule(0, 1, 0),))
    with pytest.raises(MappingError):  # missing residue 1
        MappingSpec(d=2, branches=(BranchRule(0, 2, 0), BranchRule(0, 2, 0)))
    with pytest.raises(MappingError):  # offset breaks integrality
        MappingSpec(d=2, branches=(BranchRule(0, 2, 0), BranchRule(1, 3, 0)))
    with pytest.raises(MappingError):
        MappingSpec(d=2, branches=(BranchRule(0, 0, 0), BranchRule(1, 3, 1)))


def test_integrality_over_full_window():
    # every branch must land on an integer for every residue representative
    for spec in (ORIGINAL_COLLATZ, THREE_X_PLUS_ONE, carnielli_t(7), carnielli_l(6)):
        for n in range(-3 * spec.d, 3 * spec.d + 1):
            b = spec.branch_for(n)
            assert (b.multiplier * n - b.offset) % spec.d == 0
