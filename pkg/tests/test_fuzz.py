import numpy as np
import pytest

from bell_tradeoff import sample_input
from bell_tradeoff.fuzz import CHECKS, FAST_CHECKS, check_one, run_fuzz, trial_plan


def test_plan_is_deterministic():
    a = trial_plan(42, 100, 1, 6)
    b = trial_plan(42, 100, 1, 6)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    c = trial_plan(43, 100, 1, 6)
    assert not np.array_equal(a[1], c[1])


def test_plan_respects_lambda_range():
    ns, _ = trial_plan(0, 500, 3, 6)
    assert ns.min() >= 3 and ns.max() <= 6


def test_small_campaign_all_checks():
    report = run_fuzz(trials=100, seed=2024, max_lambdas=6)
    assert report.ok
    assert report.checks == CHECKS


def test_failures_are_reported_not_raised():
    # an impossible tolerance manufactures failures deterministically
    report = run_fuzz(trials=20, seed=5, max_lambdas=4, checks=("attainability",), tol=-1.0)
    assert not report.ok
    failure = report.failures[0]
    # the recorded seed rebuilds the offending input exactly
    rebuilt = sample_input(failure.n, failure.seed)
    assert rebuilt.n == failure.n


def test_check_one_names_the_violated_check():
    inp = sample_input(3, 7)
    bad = check_one(inp, ("relaxed_bound_f",), tol=-10.0)
    assert bad and bad[0][0] == "relaxed_bound_f"


def test_argument_validation():
    with pytest.raises(ValueError):
        run_fuzz(0, 1, 6)
    with pytest.raises(ValueError):
        run_fuzz(10, 1, 0)
    with pytest.raises(ValueError):
        run_fuzz(10, 1, 6, checks=("nonsense",))


def test_fast_checks_subset():
    assert set(FAST_CHECKS) < set(CHECKS)
    report = run_fuzz(trials=200, seed=11, max_lambdas=6, checks=FAST_CHECKS)
    assert report.ok
