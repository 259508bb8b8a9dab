import numpy as np
import pytest

from bell_tradeoff import (
    InfeasiblePointError,
    brute_force_sopt,
    chsh_value,
    compose,
    construction_params,
    f_functional,
    hiddenness,
    measurement_dependence,
    optimal_chsh,
    optimal_output,
    realize,
    reduce_input,
    sample_input,
    validate_input,
)
from bell_tradeoff.construct import ReductionError

H_LT1_VERTICES = [(0.0, 0.0, 2.0), (2.0 / 3.0, 0.75, 4.0), (2.0, 0.25, 4.0)]


class TestConstructionParams:
    def test_pr_box_level_point(self):
        p = construction_params(2.0, 0.5, 4.0)
        assert (p.n0, p.n) == (1, 4)
        assert p.y == pytest.approx(1.0 / 12.0, abs=0)
        assert (p.t1, p.t2, p.t3) == (0.0, 1.0, 0.0)
        assert p.u == pytest.approx(0.5) and p.u_bar == pytest.approx(0.5)

    def test_weights_normalized(self):
        for m, h, s in [(0.3, 0.2, 2.4), (1.5, 0.8, 3.6), (2.0, 0.99, 4.0)]:
            p = construction_params(m, h, s)
            assert p.t1 + p.t2 + p.t3 == pytest.approx(1.0, abs=1e-12)
            assert p.u + p.u_bar == pytest.approx(1.0, abs=1e-12)
            assert p.n == 4 * p.n0
            assert 1.0 / p.n < 1.0 - h

    def test_block_size_is_minimal_with_strict_margin(self):
        for h in (0.0, 0.5, 0.75, 0.9, 0.99):
            p = construction_params(0.0, h, 2.0)
            assert 1.0 / (4.0 * p.n0) < 1.0 - h
            assert p.n0 == 1 or 1.0 / (4.0 * (p.n0 - 1)) >= 1.0 - h
        assert construction_params(0.0, 0.99, 2.0).n0 >= 25


class TestRealize:
    def test_classical_corner_is_point_model(self):
        inp = realize(0.0, 0.0, 2.0)
        assert inp.n == 4
        assert np.allclose(inp.table[0], 1.0, atol=0)
        assert np.allclose(inp.table[1:], 0.0, atol=0)

    def test_pr_box_level_table(self):
        inp = realize(2.0, 0.5, 4.0)
        expected = np.array(
            [
                [0.0, 1.0, 0.5, 0.5],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.5],
                [0.0, 0.0, 0.5, 0.0],
            ]
        )
        assert np.allclose(inp.table, expected, atol=1e-15)

    def test_infeasible_point_names_the_slack(self):
        with pytest.raises(InfeasiblePointError) as err:
            realize(0.1, 0.0, 2.5)
        assert err.value.slack_name == "b2"
        assert err.value.slack_value == pytest.approx(-0.2, abs=1e-12)

    def test_hiddenness_one_rejected(self):
        with pytest.raises(InfeasiblePointError) as err:
            realize(0.0, 1.0, 2.0)
        assert err.value.slack_name == "b4"

    def test_exact_at_h_lt1_vertices(self):
        for m, h, s in H_LT1_VERTICES:
            inp = realize(m, h, s)
            assert measurement_dependence(inp) == pytest.approx(m, abs=1e-12)
            assert hiddenness(inp) == pytest.approx(h, abs=1e-12)
            assert optimal_chsh(inp) == pytest.approx(s, abs=1e-12)

    def test_columns_sum_to_one_tightly(self):
        for m, h, s in [(0.5, 0.3, 2.6), (1.2, 0.9, 3.3), (2.0, 0.99, 4.0)]:
            table = realize(m, h, s).table
            assert np.max(np.abs(table.sum(axis=0) - 1.0)) <= 1e-12

    def test_interior_points_round_trip(self):
        rng = np.random.default_rng(11)
        count = 0
        while count < 25:
            m = rng.uniform(0.0, 2.0)
            s = rng.uniform(2.0, 4.0)
            h = rng.uniform(0.0, 0.95)
            try:
                inp = realize(m, h, s)
            except InfeasiblePointError:
                continue
            count += 1
            assert measurement_dependence(inp) == pytest.approx(m, abs=1e-9)
            assert hiddenness(inp) == pytest.approx(h, abs=1e-9)
            assert optimal_chsh(inp) == pytest.approx(s, abs=1e-9)


class TestOptimalOutput:
    def test_documented_assignment(self, two_lambda_input):
        out = optimal_output(two_lambda_input)
        # losing context of (0.1, 0.2, 0.3, 0.4) is context 1
        assert out.alice[0].tolist() == [1.0, 0.0]  # a(0) = +1, a(1) = -1
        assert out.bob[0].tolist() == [0.0, 1.0]  # b(0) = -1, b(1) = +1

    def test_tie_breaks_to_lowest_context(self):
        inp = validate_input(np.full((1, 4), 1.0))
        out = optimal_output(inp)
        beh = compose(inp, out)
        from bell_tradeoff.measures import correlators

        e = correlators(beh)
        # pattern (+, +, +, -) with the flip at context 1
        assert np.allclose(e, [-1.0, 1.0, 1.0, -1.0], atol=0)

    def test_point_input_reaches_two(self, point_input):
        beh = compose(point_input, optimal_output(point_input))
        assert chsh_value(beh) == pytest.approx(2.0, abs=1e-12)

    def test_always_deterministic_and_attaining(self):
        for seed in range(200):
            inp = sample_input(1 + seed % 6, 3_000 + seed)
            out = optimal_output(inp)
            assert out.is_deterministic
            attained = chsh_value(compose(inp, out))
            assert attained == pytest.approx(optimal_chsh(inp), abs=1e-9), seed


class TestReduce:
    def test_rejects_small_inputs(self, two_lambda_input):
        with pytest.raises(ReductionError):
            reduce_input(two_lambda_input)

    def test_immediate_exit_when_context_already_drained(self):
        # min of the first two rows is 0 at (row 1, context 1) and the
        # partner entry is 0 too: only the merge acts
        table = np.array(
            [
                [0.0, 0.2, 0.3, 0.1],
                [0.0, 0.3, 0.2, 0.4],
                [1.0, 0.5, 0.5, 0.5],
            ]
        )
        res = reduce_input(validate_input(table))
        names = [s.name for s in res.stages]
        assert names == ["input", "shift_min", "merge"]
        assert res.f_trace[0] == pytest.approx(res.f_trace[1], abs=0)

    def test_three_lambda_example(self, three_lambda_input):
        res = reduce_input(three_lambda_input)
        assert res.reduced.n == 2
        assert res.f_trace[0] == pytest.approx(1.05, abs=1e-12)
        assert all(f >= -1e-12 for f in res.f_trace)
        assert all(b <= a + 1e-12 for a, b in zip(res.f_trace, res.f_trace[1:]))

    def test_trace_length_and_monotonicity_random(self):
        for seed in range(300):
            inp = sample_input(3 + seed % 4, 7_000 + seed)
            res = reduce_input(inp)
            assert len(res.f_trace) >= 3
            assert res.reduced.n == inp.n - 1
            assert all(b <= a + 1e-12 for a, b in zip(res.f_trace, res.f_trace[1:])), seed
            for stage in res.stages:
                validate_input(stage.table)

    def test_f_trace_matches_f_functional(self, three_lambda_input):
        res = reduce_input(three_lambda_input)
        for stage in res.stages:
            assert stage.f == pytest.approx(
                f_functional(validate_input(stage.table)).f, abs=0
            )

    def test_permutations_map_back(self, three_lambda_input):
        res = reduce_input(three_lambda_input)
        original = three_lambda_input.table
        permuted = original[list(res.row_order)][:, list(res.column_order)]
        assert np.allclose(res.stages[0].table, permuted, atol=0)

    def test_reduction_keeps_oracle_consistent(self):
        inp = sample_input(5, 99)
        res = reduce_input(inp)
        assert brute_force_sopt(res.reduced).value == pytest.approx(
            optimal_chsh(res.reduced), abs=1e-12
        )

    def test_zero_rows_survive_reduction(self):
        table = np.array(
            [
                [1.0, 1.0, 1.0, 1.0],
                [0.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]
        )
        res = reduce_input(validate_input(table))
        assert res.reduced.n == 2
        assert all(b <= a + 1e-12 for a, b in zip(res.f_trace, res.f_trace[1:]))
        assert res.f_trace[-1] == pytest.approx(0.0, abs=1e-12)
