"""Scalar measures of behaviors and hidden-variable inputs.

For a behavior: correlators and the CHSH value.  For an input table:

* measurement dependence ``M`` - largest L1 distance between the
  hidden-variable distributions of two contexts (0 iff all contexts
  share one distribution),
* hiddenness ``H = 1 - max_lambda p(lambda)`` under uniformly random
  settings, i.e. ``1 - (max row sum) / 4``,
* legacy hiddenness ``H' = n - 1`` (cardinality-based, kept for
  comparison; counts zero rows too),
* optimal CHSH value ``S_opt = 4 - 2 * sum_lambda min_context p(lambda | context)``,
  the best any separable output can do for this input,
* the functional ``F = 2*K + (3/4)*M - (1/2)*Hrow`` over the raw
  summaries ``K = sum of row minima``, ``Hrow = max row sum``; ``F >= 0``
  for every valid input is the trade-off bound in disguise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .model import Behavior, HiddenInput

# ab for each outcome pair (+1,+1), (+1,-1), (-1,+1), (-1,-1)
OUTCOME_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])
OUTCOME_SIGNS.setflags(write=False)

SIGN_PATTERNS = _kernels.SIGN_PATTERNS


def correlator(behavior: Behavior, i: int) -> float:
    """Expectation of the outcome product ``a*b`` in context ``i`` (1..4)."""
    return float(behavior.distribution(i) @ OUTCOME_SIGNS)


def correlators(behavior: Behavior) -> np.ndarray:
    return behavior.table @ OUTCOME_SIGNS


def chsh_value(behavior: Behavior) -> float:
    """Max over the four one-minus sign patterns of |signed correlator sum|."""
    return float(np.abs(SIGN_PATTERNS @ correlators(behavior)).max())


class FTriple(NamedTuple):
    """Raw summaries of an input table and the combined functional."""

    k_tilde: float
    m_tilde: float
    h_tilde: float
    f: float


def f_functional(inp: HiddenInput) -> FTriple:
    k_tilde, m_tilde, h_tilde = _kernels.measure_triple(inp.table)
    f = 2.0 * k_tilde + 0.75 * m_tilde - 0.5 * h_tilde
    return FTriple(k_tilde, m_tilde, h_tilde, f)


def measurement_dependence(inp: HiddenInput) -> float:
    _, m_tilde, _ = _kernels.measure_triple(inp.table)
    return m_tilde


def hiddenness(inp: HiddenInput) -> float:
    _, _, h_tilde = _kernels.measure_triple(inp.table)
    return 1.0 - 0.25 * h_tilde


def legacy_hiddenness(inp: HiddenInput) -> int:
    """Cardinality of the hidden-variable set minus one, zero rows included."""
    return inp.n - 1


def support_size(inp: HiddenInput, threshold: float = 1e-12) -> int:
    """Diagnostic count of hidden variables carrying any mass."""
    return int((inp.table.max(axis=1) > threshold).sum())


def optimal_chsh(inp: HiddenInput) -> float:
    k_tilde, _, _ = _kernels.measure_triple(inp.table)
    return 4.0 - 2.0 * k_tilde


@dataclass(frozen=True)
class MeasureReport:
    """All scalar measures of one input, sharing a single table pass.

    Identities by construction: ``s_opt == 4 - 2*k_tilde``,
    ``m == m_tilde``, ``h == 1 - h_tilde/4``, ``h_legacy == n - 1``, and
    ``f == 2*k_tilde + 0.75*m_tilde - 0.5*h_tilde``.
    """

    s_opt: float
    m: float
    h: float
    h_legacy: int
    k_tilde: float
    m_tilde: float
    h_tilde: float
    f: float

    def to_dict(self) -> dict:
        return {
            "s_opt": self.s_opt,
            "m": self.m,
            "h": self.h,
            "h_legacy": self.h_legacy,
            "k_tilde": self.k_tilde,
            "m_tilde": self.m_tilde,
            "h_tilde": self.h_tilde,
            "f": self.f,
        }


def measure_report(inp: HiddenInput) -> MeasureReport:
    k_tilde, m_tilde, h_tilde, f = f_functional(inp)
    return MeasureReport(
        s_opt=4.0 - 2.0 * k_tilde,
        m=m_tilde,
        h=1.0 - 0.25 * h_tilde,
        h_legacy=inp.n - 1,
        k_tilde=k_tilde,
        m_tilde=m_tilde,
        h_tilde=h_tilde,
        f=f,
    )
