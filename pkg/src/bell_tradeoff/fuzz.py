"""Seeded random search for counterexamples to the trade-off relations.

No counterexample is ever expected - the relations are theorems - so a
nonempty failure list signals an implementation bug.  Every trial is
reproducible standalone from its recorded seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import TradeoffPoint, check_hiddenness_floor, check_tradeoff_point
from .construct import optimal_output, reduce_input
from .measures import chsh_value, f_functional
from .model import compose, validate_input
from .oracle import brute_force_sopt, sample_input

CHECKS = (
    "relaxed_bound_f",  # F >= 0: the relaxed CHSH bound in functional form
    "hiddenness_floor",  # H >= M / 8
    "oracle_equality",  # brute-force S_opt == closed form
    "tradeoff_point",  # (M, H, S_opt) lies in the realizable polyhedron
    "cardinality_n2",  # n = 2 forces 2 + M == S_opt
    "attainability",  # composing with the optimal output attains S_opt
    "reduction_monotone",  # row-merge never increases F (n >= 3)
)

FAST_CHECKS = tuple(c for c in CHECKS if c not in ("attainability", "reduction_monotone"))

ORACLE_TOL = 1e-12
MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class FuzzFailure:
    trial: int
    seed: int
    n: int
    check: str
    detail: str


@dataclass
class FuzzReport:
    trials: int
    seed: int
    max_lambdas: int
    checks: tuple[str, ...]
    failures: list[FuzzFailure] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "max_lambdas": self.max_lambdas,
            "checks": list(self.checks),
            "failures": [vars(f) for f in self.failures],
            "ok": self.ok,
            "elapsed_s": self.elapsed_s,
        }


def trial_plan(seed: int, trials: int, min_lambdas: int, max_lambdas: int):
    """Deterministic (n, sub-seed) pairs for each trial of a campaign.

    A single generator seeded with the master seed draws the row counts
    and the per-trial seeds; trial i can then be replayed in isolation
    via ``sample_input(n[i], seeds[i])``.
    """
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    ns = rng.integers(min_lambdas, max_lambdas + 1, size=trials)
    seeds = rng.integers(0, 2**63, size=trials, dtype=np.uint64)
    return ns, seeds


def check_one(inp, checks, tol: float) -> list[tuple[str, str]]:
    """Run the selected invariant checks on one input; return violations."""
    bad: list[tuple[str, str]] = []
    k_tilde, m_tilde, h_tilde, f = f_functional(inp)
    m = m_tilde
    h = 1.0 - 0.25 * h_tilde
    s_opt = 4.0 - 2.0 * k_tilde

    if "relaxed_bound_f" in checks and f < -tol:
        bad.append(("relaxed_bound_f", f"F = {f!r} < 0"))
    if "hiddenness_floor" in checks and not check_hiddenness_floor(m, h, tol):
        bad.append(("hiddenness_floor", f"H = {h!r} < M/8 = {m / 8.0!r}"))
    if "oracle_equality" in checks:
        brute = brute_force_sopt(inp).value
        if abs(brute - s_opt) > ORACLE_TOL:
            bad.append(("oracle_equality", f"brute {brute!r} vs closed form {s_opt!r}"))
    if "tradeoff_point" in checks:
        verdict = check_tradeoff_point(TradeoffPoint(m, h, s_opt), tol)
        if not verdict.ok:
            bad.append(("tradeoff_point", f"slacks {verdict.slacks}"))
    if "cardinality_n2" in checks and inp.n == 2 and abs(2.0 + m - s_opt) > ORACLE_TOL:
        bad.append(("cardinality_n2", f"2 + M = {2.0 + m!r} vs S_opt = {s_opt!r}"))
    if "attainability" in checks:
        attained = chsh_value(compose(inp, optimal_output(inp)))
        if abs(attained - s_opt) > tol:
            bad.append(("attainability", f"attained {attained!r} vs S_opt {s_opt!r}"))
    if "reduction_monotone" in checks and inp.n >= 3:
        result = reduce_input(inp)
        trace = result.f_trace
        for a, b in zip(trace, trace[1:]):
            if b > a + MONOTONE_TOL:
                bad.append(("reduction_monotone", f"trace {list(trace)} increases"))
                break
        else:
            for stage in result.stages:
                try:
                    validate_input(stage.table)
                except Exception as exc:
                    bad.append(("reduction_monotone", f"stage {stage.name} invalid: {exc}"))
                    break
    return bad


def run_fuzz(
    trials: int,
    seed: int,
    max_lambdas: int,
    checks=CHECKS,
    tol: float = 1e-9,
    min_lambdas: int = 1,
) -> FuzzReport:
    """Run the selected checks on ``trials`` seeded random inputs.

    Row counts are uniform on ``{min_lambdas, ..., max_lambdas}``.  The
    report lists one failure record per violated check.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if max_lambdas < 1 or min_lambdas < 1 or min_lambdas > max_lambdas:
        raise ValueError(
            f"lambda range must satisfy 1 <= min <= max, got [{min_lambdas}, {max_lambdas}]"
        )
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")

    started = time.perf_counter()
    ns, seeds = trial_plan(seed, trials, min_lambdas, max_lambdas)
    report = FuzzReport(trials, seed, max_lambdas, tuple(checks))
    for trial in range(trials):
        trial_seed = int(seeds[trial])
        inp = sample_input(int(ns[trial]), trial_seed)
        for name, detail in check_one(inp, checks, tol):
            report.failures.append(
                FuzzFailure(trial=trial, seed=trial_seed, n=inp.n, check=name, detail=detail)
            )
    report.elapsed_s = time.perf_counter() - started
    return report
