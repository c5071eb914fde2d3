from fractions import Fraction

import pytest

from quadstab.core import CRITICAL_PATTERN, VanishingPattern, WeightedFiltration
from quadstab.oracle import (
    EXAMPLE_CASES,
    FAULTS,
    SUITES,
    _len2_cases,
    brute_mu,
    run_all,
    run_suite,
    weight_grid,
)


def test_suite_table():
    assert [s.number for s in SUITES] == list(range(1, 11))
    assert len(EXAMPLE_CASES) == 3
    assert len(_len2_cases()) == 220


def test_weight_grid():
    grid = weight_grid(8)
    assert len(grid) == 22
    assert grid[0] == Fraction(1, 8) and grid[-1] == 1


def test_brute_mu_critical_length_two():
    f = WeightedFiltration(5, 0, (1, 4), (0, 0), (1, 2))
    assert brute_mu(f, VanishingPattern(CRITICAL_PATTERN)) == 2


@pytest.mark.parametrize("number", range(1, 11))
def test_small_runs_pass(number):
    res = run_suite(number, trials=5, seed=11)
    assert res.passed, res.failures


def test_split_drift_is_caught():
    res = run_suite(1, trials=5, seed=0, fault="split-drift")
    assert not res.passed
    assert all("conservation" in msg for msg in res.failures)


def test_dropping_critical_pairs_is_caught():
    res = run_suite(7, trials=50, seed=0, fault="drop-critical")
    assert not res.passed


def test_unknown_fault():
    with pytest.raises(ValueError):
        run_suite(1, trials=1, fault="cosmic-ray")
    assert set(FAULTS) == {"split-drift", "drop-critical"}


def test_parallel_matches_serial():
    serial = run_all(trials=8, seed=4, only=[1, 6])
    parallel = run_all(trials=8, seed=4, jobs=2, only=[1, 6])
    assert [(r.trials, r.failures) for r in serial] == [(r.trials, r.failures) for r in parallel]
