"""Independent brute-force verification tools.

Nothing here shares a code path with the closed-form measures: the
optimal CHSH value is recomputed by exhaustive enumeration of
deterministic local strategies, random inputs come from an exactly
uniform simplex sampler, and small constraint systems get a generic
active-set vertex enumerator with Fourier-Motzkin feasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import _kernels
from .model import HiddenInput, validate_input

#: Deterministic local strategies (a0, a1, b0, b1) in {-1, +1}, and the
#: correlators a_x * b_y they induce per context.
STRATEGIES = _kernels.STRATEGIES
STRATEGY_CORRELATORS = _kernels.STRATEGY_CORRELATORS


@dataclass(frozen=True)
class BruteForceResult:
    value: float
    #: index into STRATEGIES for each hidden variable, for the best pattern
    strategy_indices: np.ndarray
    #: row of measures.SIGN_PATTERNS the maximum was attained at
    pattern: int

    def strategy(self, lam: int) -> tuple[int, int, int, int]:
        return tuple(int(v) for v in STRATEGIES[self.strategy_indices[lam]])


def brute_force_sopt(inp: HiddenInput) -> BruteForceResult:
    """Optimal CHSH value by exhaustive per-lambda strategy search.

    For a fixed sign pattern the objective is additive over hidden
    variables, so searching the 16 deterministic strategies per lambda and
    combining per-lambda maxima is exact; the cost is O(n * 16 * 4)
    instead of O(16^n).  Ties prefer strategies deviating from the
    pattern in a single context (then the lowest strategy index).
    """
    value, strategies, pattern = _kernels.brute_sopt(inp.table)
    return BruteForceResult(float(value), np.asarray(strategies), int(pattern))


def column_seed_sequence(seed: int, context: int) -> np.random.SeedSequence:
    """Fixed seed expansion: one child stream per context column.

    ``SeedSequence(entropy=seed, spawn_key=(context,))`` with the 0-based
    context index; documented so any sampled table can be rebuilt from
    ``(n, seed)`` alone.
    """
    return np.random.SeedSequence(entropy=seed, spawn_key=(context,))


def sample_input(n: int, seed: int) -> HiddenInput:
    """Random input with each context column uniform on the n-simplex.

    Columns are independent; each is a vector of unit-rate exponential
    draws normalized to sum one, which is exactly the uniform (flat
    Dirichlet) distribution on the simplex.
    """
    if n < 1:
        raise ValueError(f"need at least one hidden variable, got n={n}")
    table = np.empty((n, 4))
    for j in range(4):
        rng = np.random.default_rng(column_seed_sequence(seed, j))
        x = rng.exponential(size=n)
        table[:, j] = x / x.sum()
    return HiddenInput(table)


def sample_measurement_independent_input(n: int, seed: int) -> HiddenInput:
    """Random input whose four context columns are identical."""
    if n < 1:
        raise ValueError(f"need at least one hidden variable, got n={n}")
    rng = np.random.default_rng(column_seed_sequence(seed, 0))
    x = rng.exponential(size=n)
    col = x / x.sum()
    return HiddenInput(np.tile(col[:, None], (1, 4)))


def sampled_input_is_valid(n: int, seed: int, tolerance: float = 1e-12) -> bool:
    """Re-run full validation on a sampled table at the given tolerance."""
    try:
        validate_input(sample_input(n, seed).table, tolerance)
    except Exception:
        return False
    return True


# --- generic vertex enumeration for d in {2, 3} ------------------------------

Halfspace = tuple[Sequence[float], float]  # (a, b) meaning a . x <= b


@dataclass(frozen=True)
class VertexEnumeration:
    status: str  # "bounded" | "unbounded" | "empty"
    vertices: np.ndarray  # (k, d), lexicographically sorted

    @property
    def count(self) -> int:
        return self.vertices.shape[0]


def _normals_offsets(halfspaces: Sequence[Halfspace]) -> tuple[np.ndarray, np.ndarray]:
    A = np.array([h[0] for h in halfspaces], dtype=float)
    b = np.array([h[1] for h in halfspaces], dtype=float)
    if A.ndim != 2 or A.shape[1] not in (2, 3):
        raise ValueError("constraints must live in 2 or 3 variables")
    return A, b


def _fourier_motzkin_feasible(A: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Decide whether {x : A x <= b} is nonempty by variable elimination."""
    rows = [(A[i].copy(), float(b[i])) for i in range(A.shape[0])]
    d = A.shape[1]
    for var in range(d - 1, -1, -1):
        pos, neg, rest = [], [], []
        for a, rhs in rows:
            c = a[var]
            if c > tol:
                pos.append((a / c, rhs / c))
            elif c < -tol:
                neg.append((a / -c, rhs / -c))
            else:
                rest.append((a, rhs))
        for ap, bp in pos:  # x_var <= bp - ap' . x'
            for an, bn in neg:  # x_var >= -(bn) + ... combine
                a_new = ap + an
                a_new[var] = 0.0
                rest.append((a_new, bp + bn))
        rows = rest
    return all(rhs >= -tol for _, rhs in rows)


def _has_recession_direction(A: np.ndarray, tol: float = 1e-9) -> bool:
    """True if the cone {d : A d <= 0} contains a nonzero direction."""
    d = A.shape[1]
    if A.shape[0] == 0:
        return True
    # lineality space: null space of A
    _, svals, vt = np.linalg.svd(A)
    null_mask = np.zeros(vt.shape[0], dtype=bool)
    null_mask[: svals.size] = svals <= tol * max(1.0, svals[0] if svals.size else 1.0)
    null_mask[svals.size:] = True
    if null_mask.any():
        return True
    # extreme rays: intersections of d-1 active constraints
    candidates = []
    if d == 2:
        for a in A:
            candidates.append(np.array([-a[1], a[0]]))
    else:
        for i, j in combinations(range(A.shape[0]), 2):
            candidates.append(np.cross(A[i], A[j]))
    for c in candidates:
        norm = np.linalg.norm(c)
        if norm <= tol:
            continue
        c = c / norm
        for direction in (c, -c):
            if np.all(A @ direction <= tol):
                return True
    return False


def enumerate_vertices(
    halfspaces: Sequence[Halfspace], tolerance: float = 1e-9
) -> VertexEnumeration:
    """All points where d constraints are active and every constraint holds.

    Duplicates within ``tolerance`` are merged and the result is sorted
    lexicographically, so the output does not depend on constraint order.
    Empty and unbounded systems are reported via ``status`` rather than
    raised.
    """
    A, b = _normals_offsets(halfspaces)
    d = A.shape[1]
    if not _fourier_motzkin_feasible(A, b, tolerance):
        return VertexEnumeration("empty", np.empty((0, d)))

    scale = np.maximum(1.0, np.abs(b))
    found: list[np.ndarray] = []
    for active in combinations(range(A.shape[0]), d):
        M = A[list(active)]
        rhs = b[list(active)]
        if abs(np.linalg.det(M)) <= 1e-12:
            continue
        x = np.linalg.solve(M, rhs)
        if np.all(A @ x <= b + tolerance * scale):
            found.append(x)
    unique: list[np.ndarray] = []
    for x in found:
        if not any(np.max(np.abs(x - u)) <= tolerance for u in unique):
            unique.append(x + 0.0)  # normalizes -0.0
    vertices = np.array(sorted(unique, key=tuple)) if unique else np.empty((0, d))

    status = "unbounded" if _has_recession_direction(A, tolerance) else "bounded"
    return VertexEnumeration(status, vertices)
