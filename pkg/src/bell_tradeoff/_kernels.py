"""Hot numeric kernels, JIT-compiled with numba when available.

Everything downstream funnels its per-table inner loops through two
functions:

``measure_triple(table)``
    scalar summaries of an ``(n, 4)`` conditional-probability table:
    sum of row minima, max L1 distance between context columns, and
    max row sum.

``brute_sopt(table)``
    exhaustive search over the 16 deterministic local response
    strategies per hidden variable and the 4 one-minus sign patterns;
    the independent oracle for the closed-form optimal CHSH value.

Backend selection is controlled by the ``BELL_TRADEOFF_BACKEND``
environment variable, read once at import:

* ``auto`` (default) - numba if importable, else pure numpy
* ``numba``          - require numba, fail loudly if missing
* ``numpy``          - force the vectorized numpy fallback

Both implementations are kept importable (``*_loops`` / ``*_numpy``) so
the test suite and ``benchmarks/bench_kernels.py`` can compare them
directly regardless of the selected backend.
"""

from __future__ import annotations

import os

import numpy as np

# Sign patterns of the CHSH combination: exactly one negated correlator.
# Row order: minus at context 4, 3, 2, 1.  Row 0 is the fixed pattern the
# optimal-output construction uses.
SIGN_PATTERNS = np.array(
    [
        [1.0, 1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, 1.0],
        [1.0, -1.0, 1.0, 1.0],
        [-1.0, 1.0, 1.0, 1.0],
    ]
)
SIGN_PATTERNS.setflags(write=False)


def _strategy_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Strategy s encodes (a0, a1, b0, b1) in bits 0..3, bit=0 meaning +1.
    strategies = np.empty((16, 4), dtype=np.int8)
    for s in range(16):
        strategies[s] = [1 - 2 * ((s >> bit) & 1) for bit in range(4)]
    # Correlator a_x * b_y per context (x, y) = (0,0), (0,1), (1,0), (1,1).
    corr = np.empty((16, 4))
    for s, (a0, a1, b0, b1) in enumerate(strategies):
        corr[s] = [a0 * b0, a0 * b1, a1 * b0, a1 * b1]
    # Per pattern, enumerate strategies with the fewest sign mismatches
    # first (ties by index).  A first-max scan in that order then reports,
    # among equally good strategies, one that flips a single context; the
    # flipped context necessarily carries the row-minimum probability.
    order = np.empty((4, 16), dtype=np.int64)
    for c in range(4):
        mismatches = (SIGN_PATTERNS[c] * corr < 0).sum(axis=1)
        order[c] = np.argsort(mismatches, kind="stable")
    for arr in (strategies, corr, order):
        arr.setflags(write=False)
    return strategies, corr, order


STRATEGIES, STRATEGY_CORRELATORS, _STRATEGY_ORDER = _strategy_tables()


# --- loop implementations (numba-compilable) -------------------------------


def _measure_triple_loops(table):
    n = table.shape[0]
    k_tilde = 0.0
    h_tilde = 0.0
    for r in range(n):
        row_min = table[r, 0]
        row_sum = 0.0
        for i in range(4):
            v = table[r, i]
            row_sum += v
            if v < row_min:
                row_min = v
        k_tilde += row_min
        if row_sum > h_tilde:
            h_tilde = row_sum
    m_tilde = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            d = 0.0
            for r in range(n):
                d += abs(table[r, i] - table[r, j])
            if d > m_tilde:
                m_tilde = d
    return k_tilde, m_tilde, h_tilde


def _brute_sopt_loops(table):
    n = table.shape[0]
    best_total = -np.inf
    best_pattern = 0
    best_strategies = np.zeros(n, dtype=np.int64)
    current = np.zeros(n, dtype=np.int64)
    for c in range(4):
        total = 0.0
        for r in range(n):
            best_val = -np.inf
            best_s = 0
            for rank in range(16):
                s = _STRATEGY_ORDER[c, rank]
                v = 0.0
                for i in range(4):
                    v += SIGN_PATTERNS[c, i] * STRATEGY_CORRELATORS[s, i] * table[r, i]
                if v > best_val:
                    best_val = v
                    best_s = s
            total += best_val
            current[r] = best_s
        if total > best_total:
            best_total = total
            best_pattern = c
            best_strategies[:] = current
    return best_total, best_strategies, best_pattern


# --- vectorized numpy fallback ---------------------------------------------


def measure_triple_numpy(table):
    # accumulation order mirrors the loop kernel so both backends agree
    # bit for bit on tables up to numpy's pairwise-summation block size
    k_tilde = float(table.min(axis=1).sum())
    row_sums = ((table[:, 0] + table[:, 1]) + table[:, 2]) + table[:, 3]
    h_tilde = float(row_sums.max())
    m_tilde = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            d = float(np.abs(table[:, i] - table[:, j]).sum())
            if d > m_tilde:
                m_tilde = d
    return k_tilde, m_tilde, h_tilde


def brute_sopt_numpy(table):
    n = table.shape[0]
    # weights[c, s, i] = pattern sign * strategy correlator
    weights = SIGN_PATTERNS[:, None, :] * STRATEGY_CORRELATORS[None, :, :]
    best_total = -np.inf
    best_pattern = 0
    best_strategies = np.zeros(n, dtype=np.int64)
    for c in range(4):
        acc = np.zeros((n, 16))
        for i in range(4):
            acc += table[:, i][:, None] * weights[c, :, i][None, :]
        ranked = acc[:, _STRATEGY_ORDER[c]]
        total = float(ranked.max(axis=1).sum())
        if total > best_total:
            best_total = total
            best_pattern = c
            best_strategies = _STRATEGY_ORDER[c][np.argmax(ranked, axis=1)].astype(np.int64)
    return best_total, best_strategies, best_pattern


# --- backend selection ------------------------------------------------------


def _select_backend() -> str:
    choice = os.environ.get("BELL_TRADEOFF_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"BELL_TRADEOFF_BACKEND must be auto, numba, or numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    return "numba"


_BACKEND = _select_backend()

if _BACKEND == "numba":
    from numba import njit

    measure_triple_jit = njit(cache=True)(_measure_triple_loops)
    brute_sopt_jit = njit(cache=True)(_brute_sopt_loops)
    measure_triple = measure_triple_jit
    brute_sopt = brute_sopt_jit
else:
    measure_triple_jit = None
    brute_sopt_jit = None
    measure_triple = measure_triple_numpy
    brute_sopt = brute_sopt_numpy


def active_backend() -> str:
    """Name of the kernel backend selected at import ("numba" or "numpy")."""
    return _BACKEND


def warmup() -> None:
    """Force JIT compilation so timed sections measure steady-state cost."""
    probe = np.full((2, 4), 0.5)
    probe.setflags(write=False)
    measure_triple(probe)
    brute_sopt(probe)
