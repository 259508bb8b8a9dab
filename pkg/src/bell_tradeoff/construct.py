"""Constructive side of the trade-off relations.

``realize`` turns any feasible (m, h, s) triple into an explicit input
table whose measurement dependence, hiddenness, and optimal CHSH value
hit those numbers exactly; ``optimal_output`` builds the deterministic
local responses attaining the optimal CHSH value of a given input; and
``reduce`` performs the mass-shifting row-merge that maps an n-row input
to an (n-1)-row input without ever increasing the F functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import SIGN_PATTERNS
from .bounds import SLACK_NAMES, TradeoffPoint
from .measures import f_functional, hiddenness, measurement_dependence, optimal_chsh
from .model import HiddenInput, SeparableOutput, validate_input

FEASIBILITY_TOL = 1e-12
SELF_CHECK_TOL = 1e-9

# Row counts scale as 1 / (1 - h); refuse tables that would not fit in memory.
MAX_ROWS = 4_000_000


class ConstructionError(Exception):
    """Base error for the explicit model construction."""


class InfeasiblePointError(ConstructionError):
    """The requested (m, h, s) lies outside the realizable polyhedron."""

    def __init__(self, slack_name: str, slack_value: float):
        self.slack_name = slack_name
        self.slack_value = slack_value
        super().__init__(f"infeasible point: {slack_name} = {slack_value:.6g} violates the region")


class SelfCheckError(ConstructionError):
    """The constructed table failed to reproduce the requested measures.

    This can only mean an implementation defect, never bad user input,
    so it is raised rather than silently returning a wrong table.
    """


class ReductionError(Exception):
    """Raised when the row-merge reduction cannot run (n < 3)."""


@dataclass(frozen=True)
class ConstructionParams:
    """Mixing weights of the explicit construction for one (m, h, s).

    ``n0`` block length, ``n = 4 n0`` rows, ``y = 1 / (12 n0)``;
    ``u + u_bar = 1`` split the first row's mass against the bulk and
    ``t1 + t2 + t3 = 1`` redistribute the slacks ``b1, b2, b3``.
    """

    n0: int
    n: int
    y: float
    u: float
    u_bar: float
    t1: float
    t2: float
    t3: float


def construction_params(m: float, h: float, s: float) -> ConstructionParams:
    """Derive block sizes and weights, rejecting infeasible points.

    ``n0`` is the smallest positive integer with ``1/(4 n0) < 1 - h``
    strictly, which keeps ``u`` and ``u_bar`` well defined even when the
    ``b5`` slack vanishes.
    """
    point = TradeoffPoint(m, h, s)
    slacks = point.slacks()
    for name in ("b1", "b2", "b3", "b5"):
        if slacks[name] < -FEASIBILITY_TOL:
            raise InfeasiblePointError(name, slacks[name])
    if slacks["b4"] <= FEASIBILITY_TOL:
        raise InfeasiblePointError("b4", slacks["b4"])
    b1, b2, b3, b4, b5 = (max(0.0, slacks[nm]) if nm != "b4" else slacks[nm] for nm in SLACK_NAMES)

    n0 = math.floor(1.0 / (4.0 * b4)) + 1
    n = 4 * n0
    if n > MAX_ROWS:
        raise ConstructionError(
            f"hiddenness {h} requires {n} rows; refusing tables above {MAX_ROWS}"
        )
    y = 1.0 / (12.0 * n0)
    denom = b5 + b4 - 1.0 / n
    u = (b4 - 1.0 / n) / denom
    u_bar = b5 / denom
    return ConstructionParams(
        n0=n0,
        n=n,
        y=y,
        u=u,
        u_bar=u_bar,
        t1=b1 / 2.0,
        t2=b2 / 4.0,
        t3=3.0 * b3 / 4.0,
    )


def realize(m: float, h: float, s: float) -> HiddenInput:
    """Explicit input whose measures are exactly (m, h, s).

    The table has four blocks of ``n0`` rows.  The entries below are the
    closed-form block values per context; the first row of block one
    additionally carries the ``u`` share of the mass.  After building the
    table the three measures are recomputed and compared against the
    request within ``SELF_CHECK_TOL``; any deviation raises
    :class:`SelfCheckError`.
    """
    p = construction_params(m, h, s)
    n0, y, u, ub, t1, t2, t3 = p.n0, p.y, p.u, p.u_bar, p.t1, p.t2, p.t3

    base = 3.0 * t1 * ub * y
    table = np.empty((p.n, 4))
    blocks = [slice(0, n0), slice(n0, 2 * n0), slice(2 * n0, 3 * n0), slice(3 * n0, 4 * n0)]

    # context 1
    table[blocks[0], 0] = base
    table[blocks[1], 0] = base + 12.0 * t2 * y + 4.0 * t3 * y
    table[blocks[2], 0] = base + 4.0 * t3 * y
    table[blocks[3], 0] = base + 4.0 * t3 * y
    table[0, 0] += u * t1
    # context 2
    table[blocks[0], 1] = ub * y * (3.0 * t1 + 12.0 * t2 + 4.0 * t3)
    table[blocks[1], 1] = base
    table[blocks[2], 1] = base + 4.0 * t3 * y
    table[blocks[3], 1] = base + 4.0 * t3 * y
    table[0, 1] += u * (1.0 - 2.0 * t3 / 3.0)
    # context 3
    table[blocks[0], 2] = ub * y * (3.0 * t1 + 4.0 * t3)
    table[blocks[1], 2] = base + 4.0 * t3 * y
    table[blocks[2], 2] = base
    table[blocks[3], 2] = 4.0 * t3 * y + ub * y * (3.0 * t1 + 12.0 * t2)
    table[0, 2] += u * (1.0 - 2.0 * t3 / 3.0)
    # context 4
    table[blocks[0], 3] = ub * y * (3.0 * t1 + 4.0 * t3)
    table[blocks[1], 3] = base + 4.0 * t3 * y
    table[blocks[2], 3] = 4.0 * t3 * y + ub * y * (3.0 * t1 + 12.0 * t2)
    table[blocks[3], 3] = base
    table[0, 3] += u * (1.0 - 2.0 * t3 / 3.0)

    inp = validate_input(table)
    deltas = realization_deltas(inp, m, h, s)
    worst = max(abs(v) for v in deltas.values())
    if worst > SELF_CHECK_TOL:
        raise SelfCheckError(
            f"construction for ({m}, {h}, {s}) reproduced measures off by {worst:.3g}: {deltas}"
        )
    return inp


def realization_deltas(inp: HiddenInput, m: float, h: float, s: float) -> dict[str, float]:
    """Signed differences between the measures of ``inp`` and (m, h, s)."""
    return {
        "m": measurement_dependence(inp) - m,
        "h": hiddenness(inp) - h,
        "s_opt": optimal_chsh(inp) - s,
    }


def optimal_output(inp: HiddenInput) -> SeparableOutput:
    """Deterministic output attaining the optimal CHSH value of ``inp``.

    Per hidden variable the losing context is the argmin of
    ``p(lambda | i)`` (lowest index on ties).  With the fixed sign
    pattern ``(+, +, +, -)`` the local responses are chosen so the
    signed correlator is +1 in every context except the losing one;
    such responses always exist because flipping a single context keeps
    the product of the four correlators at +1.
    """
    pattern = SIGN_PATTERNS[0]
    n = inp.n
    alice = np.empty((n, 2))
    bob = np.empty((n, 2))
    losing = np.argmin(inp.table, axis=1)
    for lam in range(n):
        d = pattern.copy()
        d[losing[lam]] = -d[losing[lam]]
        a0 = 1.0
        b0 = d[0] * a0
        b1 = d[1] * a0
        a1 = d[2] * b0
        alice[lam] = [(1.0 + a0) / 2.0, (1.0 + a1) / 2.0]
        bob[lam] = [(1.0 + b0) / 2.0, (1.0 + b1) / 2.0]
    return SeparableOutput(alice, bob)


# --- reduction ----------------------------------------------------------------

_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class ReduceStage:
    name: str  # "input" | "shift_min" | "drain_context" | "merge"
    table: np.ndarray
    f: float


@dataclass(frozen=True)
class ReduceResult:
    reduced: HiddenInput
    f_trace: tuple[float, ...]
    stages: tuple[ReduceStage, ...]
    #: original row index at each working position (applies to stage tables)
    row_order: tuple[int, ...]
    #: original context column at each working position
    column_order: tuple[int, ...]


def _snapshot(name: str, table: np.ndarray, stages: list[ReduceStage]) -> None:
    frozen = table.copy()
    frozen.setflags(write=False)
    f = f_functional(HiddenInput(frozen)).f
    stages.append(ReduceStage(name, frozen, f))


def reduce_input(inp: HiddenInput) -> ReduceResult:
    """Merge two hidden variables without increasing the F functional.

    Stages, in the working frame (rows/columns permuted so the heaviest
    row sits third and the smallest entry of the first two rows sits at
    position (1, 1)):

    1. shift that smallest entry's mass from row one to row three,
    2. repeatedly drain the remaining first-two-row entries of some
       context into row three until a context is zero in both rows,
    3. merge rows one and two.

    The F value after every stage is recorded; the sequence never
    increases.  Only inputs with at least three hidden variables reduce.
    """
    if inp.n < 3:
        raise ReductionError(f"reduction needs n >= 3, got n={inp.n}")

    table = np.array(inp.table, dtype=float)
    heavy = int(np.argmax(table.sum(axis=1)))
    others = [r for r in range(inp.n) if r != heavy]
    row_order = others[:2] + [heavy] + others[2:]
    table = table[row_order]

    flat = int(np.argmin(table[:2, :]))
    min_row, min_col = divmod(flat, 4)
    if min_row == 1:
        table[[0, 1]] = table[[1, 0]]
        row_order[0], row_order[1] = row_order[1], row_order[0]
    column_order = list(range(4))
    if min_col != 0:
        table[:, [0, min_col]] = table[:, [min_col, 0]]
        column_order[0], column_order[min_col] = column_order[min_col], column_order[0]

    stages: list[ReduceStage] = []
    _snapshot("input", table, stages)

    # stage 1: move the minimum of the first two rows out of row one
    p = table[0, 0]
    table[0, :] -= p
    table[2, :] += p
    table[0, 0] = 0.0
    _snapshot("shift_min", table, stages)

    # stage 2: drain until some context is zero in both of the first two rows
    remaining = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3)]
    while True:
        if any(table[0, i] <= _ZERO_TOL and table[1, i] <= _ZERO_TOL for i in range(4)):
            break
        if not remaining:
            raise RuntimeError("reduction drain loop exhausted its work set")
        q, (row, col) = min((table[r, c], (r, c)) for (r, c) in remaining)
        remaining.remove((row, col))
        if q <= _ZERO_TOL:
            continue
        partner = 1 - row
        zero_contexts = table[row, :] <= _ZERO_TOL
        for i in range(4):
            target = partner if zero_contexts[i] else row
            table[target, i] -= q
            if -_ZERO_TOL <= table[target, i] < 0.0:
                table[target, i] = 0.0
            table[2, i] += q
        _snapshot("drain_context", table, stages)

    # stage 3: merge the first two rows
    merged = np.vstack([table[0] + table[1], table[2:]])
    _snapshot("merge", merged, stages)

    reduced = validate_input(merged)
    return ReduceResult(
        reduced=reduced,
        f_trace=tuple(stage.f for stage in stages),
        stages=tuple(stages),
        row_order=tuple(row_order),
        column_order=tuple(column_order),
    )
