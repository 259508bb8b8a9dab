import math

import numpy as np
import pytest

from bell_tradeoff import (
    Behavior,
    chsh_value,
    correlator,
    f_functional,
    hiddenness,
    legacy_hiddenness,
    measure_report,
    measurement_dependence,
    optimal_chsh,
    realize,
    support_size,
    validate_input,
)

SQRT2 = math.sqrt(2.0)


def _behavior_from_correlators(values):
    # symmetric two-outcome rows realizing a prescribed correlator per context
    rows = []
    for e in values:
        same = (1.0 + e) / 4.0
        diff = (1.0 - e) / 4.0
        rows.append([same, diff, diff, same])
    return Behavior(np.array(rows))


UNIFORM = Behavior(np.full((4, 4), 0.25))
POINT = Behavior(np.array([[1.0, 0, 0, 0]] * 4))
TSIRELSON = _behavior_from_correlators([1 / SQRT2, 1 / SQRT2, 1 / SQRT2, -1 / SQRT2])
PR_BOX = _behavior_from_correlators([1.0, 1.0, 1.0, -1.0])


class TestCorrelator:
    def test_uniform_vanishes(self):
        for i in (1, 2, 3, 4):
            assert correlator(UNIFORM, i) == 0.0

    def test_point_behavior(self):
        for i in (1, 2, 3, 4):
            assert correlator(POINT, i) == 1.0

    def test_tsirelson_level_entries(self):
        row = np.array([(2 + SQRT2) / 8, (2 - SQRT2) / 8, (2 - SQRT2) / 8, (2 + SQRT2) / 8])
        beh = Behavior(np.tile(row, (4, 1)))
        assert correlator(beh, 1) == pytest.approx(1 / SQRT2, abs=1e-12)


class TestChshValue:
    def test_point_behavior_is_classical(self):
        assert chsh_value(POINT) == pytest.approx(2.0, abs=1e-12)

    def test_pr_box_reaches_four(self):
        assert chsh_value(PR_BOX) == pytest.approx(4.0, abs=1e-12)

    def test_tsirelson_value(self):
        assert chsh_value(TSIRELSON) == pytest.approx(2 * SQRT2, abs=1e-12)

    def test_range(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            rows = rng.dirichlet(np.ones(4), size=4)
            s = chsh_value(Behavior(rows))
            assert 0.0 <= s <= 4.0

    def test_invariant_under_outcome_relabeling(self):
        # flipping Alice's response to x=1 permutes outcome pairs in contexts 3, 4
        rng = np.random.default_rng(1)
        flip = [2, 3, 0, 1]  # (a, b) -> (-a, b)
        for _ in range(25):
            rows = rng.dirichlet(np.ones(4), size=4)
            flipped = rows.copy()
            flipped[2] = rows[2][flip]
            flipped[3] = rows[3][flip]
            assert chsh_value(Behavior(flipped)) == pytest.approx(
                chsh_value(Behavior(rows)), abs=1e-12
            )


class TestMeasurementDependence:
    def test_independent_input_is_zero(self):
        col = np.array([0.3, 0.2, 0.5])
        inp = validate_input(np.tile(col[:, None], (1, 4)))
        assert measurement_dependence(inp) == 0.0

    def test_two_lambda_closed_form(self, two_lambda_input):
        # for complementary rows the max L1 gap is twice the extreme spread
        assert measurement_dependence(two_lambda_input) == pytest.approx(0.6, abs=1e-12)

    def test_three_lambda_exhaustive(self, three_lambda_input):
        table = three_lambda_input.table
        pairs = [
            float(np.abs(table[:, i] - table[:, j]).sum())
            for i in range(4)
            for j in range(i + 1, 4)
        ]
        assert measurement_dependence(three_lambda_input) == pytest.approx(max(pairs), abs=0)
        assert measurement_dependence(three_lambda_input) == pytest.approx(0.6, abs=1e-12)


class TestHiddenness:
    def test_point_input(self, point_input):
        assert hiddenness(point_input) == 0.0

    def test_uniform_input_attains_cap(self):
        inp = validate_input(np.full((4, 4), 0.25))
        assert hiddenness(inp) == pytest.approx(0.75, abs=0)

    def test_three_lambda(self, three_lambda_input):
        assert hiddenness(three_lambda_input) == pytest.approx(0.65, abs=1e-12)

    def test_cap(self):
        rng = np.random.default_rng(3)
        for n in (1, 2, 5):
            inp = validate_input(rng.dirichlet(np.ones(n), size=4).T)
            assert 0.0 <= hiddenness(inp) <= 1.0 - 1.0 / n + 1e-12


class TestLegacyHiddenness:
    def test_point(self, point_input):
        assert legacy_hiddenness(point_input) == 0

    def test_five_rows(self):
        table = np.zeros((5, 4))
        table[0] = 1.0
        inp = validate_input(table)
        assert legacy_hiddenness(inp) == 4
        assert support_size(inp) == 1

    def test_realized_model(self):
        assert legacy_hiddenness(realize(2.0, 0.5, 4.0)) == 3


class TestOptimalChsh:
    def test_point(self, point_input):
        assert optimal_chsh(point_input) == pytest.approx(2.0, abs=0)

    def test_two_lambda(self, two_lambda_input):
        assert optimal_chsh(two_lambda_input) == pytest.approx(2.6, abs=1e-12)

    def test_three_lambda(self, three_lambda_input):
        assert optimal_chsh(three_lambda_input) == pytest.approx(2.7, abs=1e-12)


class TestFFunctional:
    def test_point(self, point_input):
        assert f_functional(point_input) == (1.0, 0.0, 4.0, 0.0)

    def test_two_lambda(self, two_lambda_input):
        k, m, h, f = f_functional(two_lambda_input)
        assert (k, m, h) == pytest.approx((0.7, 0.6, 3.0), abs=1e-12)
        # closed form for complementary rows: (2 p1 + p2 + p3) / 2
        assert f == pytest.approx(0.35, abs=1e-12)

    def test_three_lambda(self, three_lambda_input):
        k, m, h, f = f_functional(three_lambda_input)
        assert (k, m, h, f) == pytest.approx((0.65, 0.6, 1.4, 1.05), abs=1e-12)


class TestMeasureReport:
    def test_identities(self, three_lambda_input):
        r = measure_report(three_lambda_input)
        assert r.s_opt == 4.0 - 2.0 * r.k_tilde
        assert r.m == r.m_tilde
        assert r.h == 1.0 - r.h_tilde / 4.0
        assert r.h_legacy == 2
        assert r.f == pytest.approx(2 * r.k_tilde + 0.75 * r.m_tilde - 0.5 * r.h_tilde, abs=0)
        assert r.f >= -1e-9

    def test_json_keys(self, two_lambda_input):
        d = measure_report(two_lambda_input).to_dict()
        assert list(d) == ["s_opt", "m", "h", "h_legacy", "k_tilde", "m_tilde", "h_tilde", "f"]
