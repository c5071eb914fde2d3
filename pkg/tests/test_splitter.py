from fractions import Fraction

import pytest
from hypothesis import given, settings

from quadstab.core import CRITICAL_PATTERN, TOP, InvalidInstance, VanishingPattern, WeightedFiltration
from quadstab.oracle import EXAMPLE_CASES, EXAMPLE_PATTERN, brute_mu, example_filtration
from quadstab.splitter import (
    CASES,
    Piece,
    SplitDecomposition,
    corner_pairs,
    induced_pattern,
    min_partner,
    split_full,
    split_step,
    verify_decomposition,
)
from strategies import filtration_pairs


def test_induced_pattern_of_example_is_critical():
    assert induced_pattern(EXAMPLE_PATTERN, (1, 4)).rows == CRITICAL_PATTERN
    assert induced_pattern(EXAMPLE_PATTERN, (2, 3)).rows == CRITICAL_PATTERN
    assert induced_pattern(EXAMPLE_PATTERN, (3, 4)).rows == ((1, 1, 1),) * 3


def test_induced_pattern_rejects_bad_subsets():
    with pytest.raises(InvalidInstance):
        induced_pattern(EXAMPLE_PATTERN, ())
    with pytest.raises(InvalidInstance):
        induced_pattern(EXAMPLE_PATTERN, (3, 2))


def test_min_partner():
    assert min_partner(EXAMPLE_PATTERN, 1) == TOP
    assert min_partner(EXAMPLE_PATTERN, 3) == 3
    assert min_partner(EXAMPLE_PATTERN, TOP) == 1
    zero_row = VanishingPattern(((0, 0), (0, 1)))
    assert min_partner(zero_row, 1) is None


def test_corner_pairs_of_example():
    assert corner_pairs(EXAMPLE_PATTERN) == [(1, 5), (2, 4), (3, 3)]


@pytest.mark.parametrize("label,weights,trace,pieces,mu", EXAMPLE_CASES, ids=[c[0] for c in EXAMPLE_CASES])
def test_example_decompositions(label, weights, trace, pieces, mu):
    f = example_filtration(weights)
    dec = split_full(f, EXAMPLE_PATTERN)
    assert dec.trace == trace
    assert sorted((p.indices, p.weights) for p in dec.pieces) == sorted(
        (i, tuple(Fraction(w) for w in ws)) for i, ws in pieces
    )
    assert verify_decomposition(f, EXAMPLE_PATTERN, dec) == []
    assert brute_mu(f, EXAMPLE_PATTERN) == mu


def test_equal_weights_example():
    # all four maxima tie; the split still conserves everything
    f = example_filtration((1, 1, 1, 1))
    dec = split_full(f, EXAMPLE_PATTERN)
    assert verify_decomposition(f, EXAMPLE_PATTERN, dec) == []


def test_case_a_zero_first_row():
    m = VanishingPattern.closure(3, [(2, 2)])
    f = WeightedFiltration(6, 0, (1, 2, 4), (0, 0, 0), (1, 1, 1))
    assert split_step(f, m).case == "A"


def test_case_b_first_row_below_top():
    m = VanishingPattern.closure(3, [(1, 3)])
    f = WeightedFiltration(6, 0, (1, 2, 4), (0, 0, 0), (1, 1, 1))
    assert split_step(f, m).case == "B"


def test_split_step_needs_length_three():
    with pytest.raises(InvalidInstance):
        split_step(WeightedFiltration(3, 0, (1, 2), (0, 0), (1, 1)), VanishingPattern(CRITICAL_PATTERN))


def test_verify_flags_drift():
    f = example_filtration((2, 1, 1, 1))
    dec = split_full(f, EXAMPLE_PATTERN)
    first = dec.pieces[0]
    dec.pieces[0] = Piece(first.indices, (first.weights[0] + Fraction(1, 7),) + first.weights[1:])
    assert any("weight conservation" in msg for msg in verify_decomposition(f, EXAMPLE_PATTERN, dec))


def test_verify_flags_non_critical_pair():
    f = example_filtration((1, 1, 1, 1))
    dec = SplitDecomposition([Piece((1, 2), (1, 1)), Piece((3, 4), (1, 1))])
    failures = verify_decomposition(f, EXAMPLE_PATTERN, dec)
    assert any("(3, 4) is not critical" in msg for msg in failures)


def test_verify_flags_long_piece():
    f = example_filtration((1, 1, 1, 1))
    dec = SplitDecomposition([Piece((1, 2, 3, 4), (1, 1, 1, 1))])
    assert any("length 4 > 2" in msg for msg in verify_decomposition(f, EXAMPLE_PATTERN, dec))


@settings(max_examples=300)
@given(filtration_pairs(min_length=1, max_length=8))
def test_split_conserves_everything(pair):
    f, m = pair
    dec = split_full(f, m)
    assert verify_decomposition(f, m, dec) == []
    assert set(dec.trace) <= set(CASES)
    assert len(dec.trace) <= f.length ** 2


@given(filtration_pairs(min_length=1, max_length=6))
def test_split_is_deterministic(pair):
    f, m = pair
    assert split_full(f, m) == split_full(f, m)
