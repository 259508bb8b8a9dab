"""Inequality checkers and the feasible-region geometry.

The central object is the polyhedron of triples ``(m, h, s)`` =
(measurement dependence, hiddenness, optimal CHSH value) that separable
hidden-variable models can realize:

    b1 = 4 - s            >= 0
    b2 = 3m + 2 - s       >= 0
    b3 = s - m - 2        >= 0
    b4 = 1 - h            >  0   (strict)
    b5 = h - s/2 + 3m/8 + 1 >= 0

Its closure (``h <= 1``) has exactly six vertices.  Two planar slices
matter for plots: ``w_k``, the allowed ``(m, h)`` region when the
optimal CHSH value equals ``2 + k``, and ``W_k0``, the union of ``w_k``
over ``k in [k0, 2]``, i.e. the region compatible with an observed CHSH
value of at least ``2 + k0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import oracle
from .measures import hiddenness, measurement_dependence, optimal_chsh
from .model import HiddenInput

DEFAULT_TOL = 1e-9

SLACK_NAMES = ("b1", "b2", "b3", "b4", "b5")


@dataclass(frozen=True)
class TradeoffPoint:
    """A candidate (m, h, s) triple with its affine slacks."""

    m: float
    h: float
    s: float

    @property
    def b1(self) -> float:
        return 4.0 - self.s

    @property
    def b2(self) -> float:
        return 3.0 * self.m + 2.0 - self.s

    @property
    def b3(self) -> float:
        return self.s - self.m - 2.0

    @property
    def b4(self) -> float:
        return 1.0 - self.h

    @property
    def b5(self) -> float:
        return self.h - 0.5 * self.s + 0.375 * self.m + 1.0

    def slacks(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in SLACK_NAMES}


class CheckResult(NamedTuple):
    ok: bool
    slack: float


def check_relaxed_bound(m: float, h: float, s: float, tol: float = DEFAULT_TOL) -> CheckResult:
    """``s <= 2 + (3/4) m + 2 h`` - the relaxed CHSH bound.

    The returned slack is the bound minus ``s`` (negative means violated).
    """
    slack = 2.0 + 0.75 * m + 2.0 * h - s
    return CheckResult(slack >= -tol, slack)


class PointCheck(NamedTuple):
    ok: bool
    slacks: dict[str, float]


def check_tradeoff_point(point: TradeoffPoint, tol: float = DEFAULT_TOL) -> PointCheck:
    """Membership of (m, h, s) in the realizable polyhedron.

    ``b1, b2, b3, b5`` may dip to ``-tol``; ``b4`` must be strictly
    positive (hiddenness strictly below one).
    """
    slacks = point.slacks()
    ok = (
        slacks["b1"] >= -tol
        and slacks["b2"] >= -tol
        and slacks["b3"] >= -tol
        and slacks["b5"] >= -tol
        and slacks["b4"] > 0.0
    )
    return PointCheck(ok, slacks)


class CardinalityCheck(NamedTuple):
    ok: bool
    bound: float
    n: int
    m: float
    h: float
    s_opt: float


def check_cardinality_bound(inp: HiddenInput, tol: float = DEFAULT_TOL) -> CardinalityCheck:
    """Cardinality-resolved bound on the optimal CHSH value.

    n=1 forces ``S_opt = 2`` and ``M = H = 0``; n=2 forces the equality
    ``2 + M = S_opt`` below the generic cap; n=3 adds a ``2M`` cap and
    n>=4 a ``3M`` cap.  The ``2 + M`` lower bound for n >= 3 is an
    attainability statement about best-case models, so it is not
    asserted here.
    """
    n = inp.n
    m = measurement_dependence(inp)
    h = hiddenness(inp)
    s = optimal_chsh(inp)
    if n == 1:
        ok = abs(s - 2.0) <= tol and abs(m) <= tol and abs(h) <= tol
        return CardinalityCheck(ok, 2.0, n, m, h, s)
    if n == 2:
        bound = 2.0 + min(0.75 * m + 2.0 * h, 2.0)
        ok = abs(2.0 + m - s) <= tol and s <= bound + tol
        return CardinalityCheck(ok, bound, n, m, h, s)
    if n == 3:
        bound = 2.0 + min(2.0 * m, 0.75 * m + 2.0 * h, 2.0)
    else:
        bound = 2.0 + min(3.0 * m, 0.75 * m + 2.0 * h, 2.0)
    return CardinalityCheck(s <= bound + tol, bound, n, m, h, s)


def check_hiddenness_floor(m: float, h: float, tol: float = DEFAULT_TOL) -> bool:
    """``h >= m / 8``: measurement dependence needs hiddenness to act on."""
    return h >= m / 8.0 - tol


# --- regions -----------------------------------------------------------------

REGION_KINDS = ("wk", "wk0", "polyhedron")

#: Vertices of the closure (h <= 1) of the realizable polyhedron, as
#: (m, h, s) rows in lexicographic order.
POLYHEDRON_VERTICES = np.array(
    [
        [0.0, 0.0, 2.0],
        [0.0, 1.0, 2.0],
        [2.0 / 3.0, 0.75, 4.0],
        [2.0 / 3.0, 1.0, 4.0],
        [2.0, 0.25, 4.0],
        [2.0, 1.0, 4.0],
    ]
)
POLYHEDRON_VERTICES.setflags(write=False)


def polyhedron_halfspaces() -> list[oracle.Halfspace]:
    """Closure of the realizable region as (a, b) rows with a.(m,h,s) <= b."""
    return [
        ((0.0, 0.0, 1.0), 4.0),  # b1: s <= 4
        ((-3.0, 0.0, 1.0), 2.0),  # b2: s - 3m <= 2
        ((1.0, 0.0, -1.0), -2.0),  # b3: m + 2 <= s
        ((0.0, 1.0, 0.0), 1.0),  # b4 closure: h <= 1
        ((-0.375, -1.0, 0.5), 1.0),  # b5: s/2 - 3m/8 - h <= 1
    ]


@dataclass(frozen=True)
class RegionSpec:
    """Half-space description plus vertex list of one region.

    ``halfspaces`` describe the closure; the indices in ``strict`` mark
    faces that are open for membership (the ``h < 1`` face).  Variables
    are ``(m, h)`` for the planar kinds and ``(m, h, s)`` for the
    polyhedron.
    """

    kind: str
    parameter: float | None
    halfspaces: tuple[oracle.Halfspace, ...]
    strict: tuple[int, ...]
    vertices: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.halfspaces[0][0])


def region(kind: str, parameter: float | None = None) -> RegionSpec:
    """Build the region of the given kind.

    ``wk`` needs the violation degree ``k`` in [0, 2] (optimal CHSH value
    ``2 + k``); ``wk0`` needs the observed floor ``k0`` in [0, 2];
    ``polyhedron`` takes no parameter.
    """
    if kind not in REGION_KINDS:
        raise ValueError(f"kind must be one of {REGION_KINDS}, got {kind!r}")
    if kind == "polyhedron":
        hs = tuple(polyhedron_halfspaces())
        return RegionSpec(kind, None, hs, strict=(3,), vertices=POLYHEDRON_VERTICES)
    if parameter is None:
        raise ValueError(f"region kind {kind!r} requires a parameter")
    k = float(parameter)
    if not (0.0 <= k <= 2.0) or not math.isfinite(k):
        raise ValueError(f"parameter must lie in [0, 2], got {k}")
    if kind == "wk":
        halfspaces = (
            ((-1.0, 0.0), -k / 3.0),  # m >= k/3
            ((1.0, 0.0), k),  # m <= k
            ((-0.375, -1.0), -k / 2.0),  # h >= -3m/8 + k/2
            ((0.0, 1.0), 1.0),  # h <= 1 (strict)
        )
    else:  # wk0
        halfspaces = (
            ((-1.0, 0.0), -k / 3.0),  # m >= k0/3
            ((1.0, 0.0), 2.0),  # m <= 2
            ((0.125, -1.0), 0.0),  # h >= m/8
            ((-0.375, -1.0), -k / 2.0),  # h >= -3m/8 + k0/2
            ((0.0, 1.0), 1.0),  # h <= 1 (strict)
        )
    strict = (len(halfspaces) - 1,)
    enum = oracle.enumerate_vertices(halfspaces)
    if enum.status != "bounded":
        raise RuntimeError(f"region {kind} k={k} enumerated as {enum.status}")
    return RegionSpec(kind, k, halfspaces, strict, enum.vertices)


def region_contains(
    spec: RegionSpec,
    point,
    tol: float = DEFAULT_TOL,
    closed: bool = False,
) -> bool:
    """Half-space membership; strict faces stay strict unless ``closed``."""
    x = np.asarray(point, dtype=float)
    for idx, (a, b) in enumerate(spec.halfspaces):
        v = float(np.dot(a, x))
        if idx in spec.strict and not closed:
            if v >= b:
                return False
        elif v > b + tol:
            return False
    return True


def _ordered_polygon(vertices: np.ndarray) -> np.ndarray:
    if vertices.shape[0] <= 2:
        return vertices
    center = vertices.mean(axis=0)
    angles = np.arctan2(vertices[:, 1] - center[1], vertices[:, 0] - center[0])
    return vertices[np.argsort(angles)]


def _sample_segment(p: np.ndarray, q: np.ndarray, step: float, include_end: bool) -> list[np.ndarray]:
    length = float(np.linalg.norm(q - p))
    if length == 0.0:
        return [p] + ([q] if include_end else [])
    count = max(1, int(math.ceil(length / step)))
    ts = np.linspace(0.0, 1.0, count + 1)
    if not include_end:
        ts = ts[:-1]
    return [p + t * (q - p) for t in ts]


@dataclass(frozen=True)
class BoundarySamples:
    """Sampled boundary of a region, plus the exact vertices and edges."""

    points: np.ndarray
    vertices: np.ndarray
    edges: tuple[tuple[int, int], ...]


def polyhedron_edges(
    vertices: np.ndarray, halfspaces, tol: float = DEFAULT_TOL
) -> tuple[tuple[int, int], ...]:
    """Vertex pairs sharing at least two tight constraints (3D edges)."""
    A = np.array([h[0] for h in halfspaces])
    b = np.array([h[1] for h in halfspaces])
    active = [set(np.nonzero(np.abs(A @ v - b) <= tol)[0].tolist()) for v in vertices]
    edges = []
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if len(active[i] & active[j]) >= 2:
                edges.append((i, j))
    return tuple(edges)


def region_boundary_samples(spec: RegionSpec, step: float, tol: float = DEFAULT_TOL) -> BoundarySamples:
    """Boundary polyline (2D) or vertex/edge samples (3D) at the given step.

    Every emitted point is re-verified against the closure half-spaces
    within ``tol``.  A region with empty interior degenerates to its
    segment or point, not an error.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    vertices = spec.vertices
    points: list[np.ndarray] = []
    if spec.dimension == 2:
        ordered = _ordered_polygon(vertices)
        k = ordered.shape[0]
        if k == 0:
            ordered = np.empty((0, 2))
        elif k == 1:
            points = [ordered[0]]
        elif k == 2:
            points = _sample_segment(ordered[0], ordered[1], step, include_end=True)
        else:
            for i in range(k):
                points.extend(_sample_segment(ordered[i], ordered[(i + 1) % k], step, include_end=False))
        edges = tuple((i, (i + 1) % k) for i in range(k)) if k > 2 else ((0, 1),) if k == 2 else ()
        vertices = ordered
    else:
        edges = polyhedron_edges(vertices, spec.halfspaces, tol)
        points = [v for v in vertices]
        for i, j in edges:
            points.extend(_sample_segment(vertices[i], vertices[j], step, include_end=False))
    pts = np.array(points) if points else np.empty((0, spec.dimension))
    for p in pts:
        if not region_contains(spec, p, tol=tol, closed=True):
            raise RuntimeError(f"sampled boundary point {p} escaped the region")
    return BoundarySamples(pts, vertices, edges)
