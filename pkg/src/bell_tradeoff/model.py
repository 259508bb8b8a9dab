"""Domain types for the CHSH scenario with hidden variables.

Three kinds of objects move through the library:

* :class:`HiddenInput` - the conditional distributions ``p(lambda | context)``
  of ``n`` hidden variables given each of the four measurement contexts,
  stored as an ``(n, 4)`` table whose columns each sum to one.
* :class:`SeparableOutput` - per hidden variable, local response
  probabilities ``p(a=+1 | x, lambda)`` and ``p(b=+1 | y, lambda)``.
* :class:`Behavior` - the observable joint outcome distributions
  ``p(a, b | x, y)``, one 4-vector per context.

Measurement contexts are labelled 1..4 in the fixed order
``(x, y) = (0,0), (0,1), (1,0), (1,1)``; outcome pairs are ordered
``(+1,+1), (+1,-1), (-1,+1), (-1,-1)``.  All types are immutable after
validation and every operation here is a pure function, so concurrent
use needs no locking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

DEFAULT_TOLERANCE = 1e-9

CONTEXT_PAIRS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
OUTCOME_PAIRS: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class ModelError(Exception):
    """Base error for model construction and composition."""


class InvalidModelError(ModelError):
    """A probability table violates its invariants.

    Carries the full list of :class:`Violation` records so callers can
    report every problem at once instead of the first one found.
    """

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class ModelMismatchError(ModelError):
    """Input and output disagree on the number of hidden variables."""


@dataclass(frozen=True)
class Violation:
    kind: str  # "empty_table" | "negative_entry" | "column_sum_mismatch" | "column_overflow"
    row: int | None = None  # hidden-variable index, 0-based
    context: int | None = None  # context label, 1-based
    value: float | None = None

    def __str__(self) -> str:
        parts = [self.kind]
        if self.row is not None:
            parts.append(f"lambda={self.row + 1}")
        if self.context is not None:
            parts.append(f"context={self.context}")
        if self.value is not None:
            parts.append(f"value={self.value!r}")
        return " ".join(parts)


def context_index(x: int, y: int) -> int:
    """Context label in 1..4 for the measurement pair ``(x, y)``."""
    if x not in (0, 1) or y not in (0, 1):
        raise ValueError(f"measurement settings must be bits, got ({x}, {y})")
    return 2 * x + y + 1


def context_pair(i: int) -> tuple[int, int]:
    """Inverse of :func:`context_index`."""
    if i not in (1, 2, 3, 4):
        raise ValueError(f"context label must be in 1..4, got {i}")
    return CONTEXT_PAIRS[i - 1]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HiddenInput:
    """Validated ``(n, 4)`` table of ``p(lambda | context)``."""

    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def column(self, i: int) -> np.ndarray:
        """Distribution over hidden variables in context ``i`` (1..4)."""
        if i not in (1, 2, 3, 4):
            raise ValueError(f"context label must be in 1..4, got {i}")
        return self.table[:, i - 1]

    def to_json(self) -> dict:
        return {
            "kind": "input",
            "n": self.n,
            "p_lambda_given_context": [self.table[:, i].tolist() for i in range(4)],
        }


@dataclass(frozen=True)
class SeparableOutput:
    """Local response tables ``p(a=+1 | x, lambda)`` and ``p(b=+1 | y, lambda)``.

    ``alice[lam] = (p(a=+1 | x=0, lam), p(a=+1 | x=1, lam))`` and likewise
    for ``bob`` with the setting ``y``.
    """

    alice: np.ndarray = field(repr=False)
    bob: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        alice = _freeze(self.alice)
        bob = _freeze(self.bob)
        for name, arr in (("alice", alice), ("bob", bob)):
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise InvalidModelError(
                    [Violation("bad_shape", value=float(arr.ndim))]
                )
            if np.any(arr < -0.0) or np.any(arr > 1.0):
                bad = np.argwhere((arr < 0.0) | (arr > 1.0))[0]
                raise InvalidModelError(
                    [Violation("entry_out_of_range", row=int(bad[0]), value=float(arr[tuple(bad)]))]
                )
        if alice.shape[0] != bob.shape[0]:
            raise ModelMismatchError(
                f"alice has {alice.shape[0]} hidden variables, bob has {bob.shape[0]}"
            )
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)

    @property
    def n(self) -> int:
        return self.alice.shape[0]

    @property
    def is_deterministic(self) -> bool:
        """True when every response probability is exactly 0 or 1."""
        for arr in (self.alice, self.bob):
            if not np.all((arr == 0.0) | (arr == 1.0)):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "kind": "output",
            "alice": self.alice.tolist(),
            "bob": self.bob.tolist(),
        }


@dataclass(frozen=True)
class Behavior:
    """Joint outcome distributions, one row per context.

    ``table[i - 1]`` holds ``p(a, b | context i)`` over the outcome pairs
    in :data:`OUTCOME_PAIRS` order.
    """

    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        table = _freeze(self.table)
        violations = []
        if table.shape != (4, 4):
            raise InvalidModelError([Violation("bad_shape")])
        for i in range(4):
            row = table[i]
            for j in range(4):
                if row[j] < 0.0:
                    violations.append(
                        Violation("negative_entry", row=j, context=i + 1, value=float(row[j]))
                    )
            s = float(row.sum())
            if abs(s - 1.0) > DEFAULT_TOLERANCE:
                violations.append(Violation("column_sum_mismatch", context=i + 1, value=s))
        if violations:
            raise InvalidModelError(violations)
        object.__setattr__(self, "table", table)

    def distribution(self, i: int) -> np.ndarray:
        if i not in (1, 2, 3, 4):
            raise ValueError(f"context label must be in 1..4, got {i}")
        return self.table[i - 1]

    def to_json(self) -> dict:
        return {"kind": "behavior", "p_ab_given_xy": self.table.tolist()}


def input_violations(raw, tolerance: float = DEFAULT_TOLERANCE) -> list[Violation]:
    """Collect every invariant violation of a candidate input table."""
    arr = np.asarray(raw, dtype=float)
    if arr.size == 0:
        return [Violation("empty_table")]
    if arr.ndim != 2 or arr.shape[1] != 4:
        return [Violation("bad_shape")]
    violations = []
    for r, i in zip(*np.nonzero(arr < 0.0)):
        violations.append(
            Violation("negative_entry", row=int(r), context=int(i) + 1, value=float(arr[r, i]))
        )
    sums = arr.sum(axis=0)
    for i in range(4):
        if abs(sums[i] - 1.0) > tolerance:
            violations.append(Violation("column_sum_mismatch", context=i + 1, value=float(sums[i])))
    return violations


def validate_input(raw, tolerance: float = DEFAULT_TOLERANCE) -> HiddenInput:
    """Build a :class:`HiddenInput`, raising with all violations if invalid.

    ``raw`` is an ``(n, 4)`` array-like, one row per hidden variable, one
    column per context in the fixed 1..4 order.  Rows of zeros are legal
    and retained.
    """
    violations = input_violations(raw, tolerance)
    if violations:
        raise InvalidModelError(violations)
    return HiddenInput(np.asarray(raw, dtype=float))


def compose(inp: HiddenInput, out: SeparableOutput) -> Behavior:
    """Observable behavior of the model ``(inp, out)``.

    ``p(a, b | x, y) = sum_lambda p(lambda | x, y) p(a | x, lambda) p(b | y, lambda)``.
    """
    if inp.n != out.n:
        raise ModelMismatchError(
            f"input has {inp.n} hidden variables, output has {out.n}"
        )
    rows = np.empty((4, 4))
    for idx, (x, y) in enumerate(CONTEXT_PAIRS):
        w = inp.table[:, idx]
        pa = out.alice[:, x]
        pb = out.bob[:, y]
        rows[idx] = [
            float(w @ (pa * pb)),
            float(w @ (pa * (1.0 - pb))),
            float(w @ ((1.0 - pa) * pb)),
            float(w @ ((1.0 - pa) * (1.0 - pb))),
        ]
    return Behavior(rows)


def truncate(rows, alpha: int, tolerance: float = DEFAULT_TOLERANCE) -> HiddenInput:
    """Finite input from the first rows of a (possibly longer) table.

    Rows ``1..alpha-1`` are copied verbatim; row ``alpha`` absorbs the
    remaining mass of each context column.  ``truncate(t, len(t))`` of an
    already-normalized table reproduces it, and ``alpha=1`` puts all mass
    on a single hidden variable.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be a positive integer, got {alpha}")
    arr = np.asarray(rows, dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, 4)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise InvalidModelError([Violation("bad_shape")])
    if arr.shape[0] < alpha - 1:
        raise ValueError(
            f"need the first {alpha - 1} rows to truncate at alpha={alpha}, got {arr.shape[0]}"
        )
    head = arr[: alpha - 1]
    partial = head.sum(axis=0)
    overflow = [
        Violation("column_overflow", context=i + 1, value=float(partial[i]))
        for i in range(4)
        if partial[i] > 1.0 + tolerance
    ]
    if overflow:
        raise InvalidModelError(overflow)
    remainder = np.clip(1.0 - partial, 0.0, None)
    table = np.vstack([head, remainder])
    return validate_input(table, tolerance)


# --- JSON model files --------------------------------------------------------

def model_from_json(data: dict):
    """Decode a model JSON object into the matching domain type."""
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidModelError([Violation("missing_kind")])
    kind = data["kind"]
    if kind == "input":
        cols = data.get("p_lambda_given_context")
        if not isinstance(cols, list) or len(cols) != 4:
            raise InvalidModelError([Violation("bad_shape")])
        lengths = {len(c) for c in cols}
        if len(lengths) != 1:
            raise InvalidModelError([Violation("bad_shape")])
        if "n" in data and data["n"] != len(cols[0]):
            raise InvalidModelError([Violation("bad_shape", value=float(data["n"]))])
        return validate_input(np.array(cols, dtype=float).T)
    if kind == "output":
        return SeparableOutput(np.array(data["alice"], dtype=float), np.array(data["bob"], dtype=float))
    if kind == "behavior":
        return Behavior(np.array(data["p_ab_given_xy"], dtype=float))
    raise InvalidModelError([Violation("unknown_kind")])


def load_model(path):
    """Read a model JSON file (input, output, or behavior kind)."""
    text = Path(path).read_text(encoding="utf-8")
    return model_from_json(json.loads(text))


def save_model(obj, path) -> None:
    Path(path).write_text(json.dumps(obj.to_json(), indent=2) + "\n", encoding="utf-8")
