"""Finite metric spaces with dense distance matrices.

Everything downstream (rough-angle checks, curve analysis, generated
counterexample spaces) runs on :class:`FiniteMetricSpace`: a labeled point
set with a full symmetric distance matrix and a per-space comparison
tolerance. This module owns validation of the metric axioms, Euclidean
comparison angles, the snowflake transform, separated-subset search, and
greedy doubling-constant estimation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import floyd_warshall

from .errors import DegenerateTripleError, MalformedInputError, ParameterError
from . import search

DEFAULT_TOLERANCE = 1e-9

__all__ = [
    "AngleValue",
    "DoublingEstimate",
    "FiniteMetricSpace",
    "SeparatedSubset",
    "ValidationReport",
    "comparison_angle",
    "comparison_angle_matrix",
    "doubling_estimate",
    "max_separated_subset",
    "random_metric_space",
    "snowflake_transform",
    "validate_metric",
]


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space given by labels and a dense distance matrix.

    The matrix is symmetrized at construction (average of the two
    triangles) and frozen read-only; asymmetric *input* is repaired, never
    trusted. Metric axioms are not enforced here, use
    :func:`validate_metric` for that. ``tolerance`` is the absolute slack
    used by every axiom and angle comparison on this space.
    """

    labels: tuple
    dist: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise MalformedInputError(f"distance matrix must be square, got shape {d.shape}")
        if len(self.labels) != d.shape[0]:
            raise MalformedInputError(
                f"{len(self.labels)} labels for a {d.shape[0]}x{d.shape[0]} matrix"
            )
        if not np.all(np.isfinite(d)):
            raise MalformedInputError("distance matrix contains NaN or infinite entries")
        if np.any(d < 0):
            raise MalformedInputError("distance matrix contains negative entries")
        if self.tolerance < 0:
            raise ParameterError("tolerance must be nonnegative")
        d = (d + d.T) / 2.0
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def index(self, point) -> int:
        """Resolve a label (or an already-valid index) to a point index."""
        if isinstance(point, (int, np.integer)):
            i = int(point)
            if not 0 <= i < self.n:
                raise MalformedInputError(f"point index {i} out of range for n={self.n}")
            return i
        try:
            return self.labels.index(point)
        except ValueError:
            raise MalformedInputError(f"unknown point label {point!r}") from None

    def indices(self, points) -> list[int]:
        return [self.index(p) for p in points]

    def subspace(self, points) -> "FiniteMetricSpace":
        """Induced submetric on the given points, in the given order."""
        idx = self.indices(points)
        sub = self.dist[np.ix_(idx, idx)].copy()
        return FiniteMetricSpace(tuple(self.labels[i] for i in idx), sub, self.tolerance)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_metric`: pass, or every axiom violation."""

    passed: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.passed


def validate_metric(space: FiniteMetricSpace) -> ValidationReport:
    """Check the four metric axioms within the space's tolerance.

    Violations are reported as tuples: ``("diagonal", i, value)``,
    ``("symmetry", i, j, d_ij, d_ji)``, ``("separation", i, j, value)``, and
    ``("triangle", i, j, k, d_ik, d_ij + d_jk)`` meaning
    ``d(i,k) > d(i,j) + d(j,k)`` beyond tolerance. All failing index
    combinations are listed, in lexicographic order.
    """
    d = space.dist
    tol = space.tolerance
    n = space.n
    violations = []

    for i in np.flatnonzero(np.abs(np.diag(d)) > tol):
        violations.append(("diagonal", int(i), float(d[i, i])))

    asym = np.argwhere(np.abs(d - d.T) > 0)
    for i, j in asym:
        if i < j:
            violations.append(("symmetry", int(i), int(j), float(d[i, j]), float(d[j, i])))

    off = ~np.eye(n, dtype=bool)
    for i, j in np.argwhere((d <= tol) & off):
        if i < j:
            violations.append(("separation", int(i), int(j), float(d[i, j])))

    # d[i,k] <= d[i,j] + d[j,k] + tol for all i, j, k (i, k endpoints, j via).
    through = d[:, :, None] + d[None, :, :]  # through[i,j,k] = d[i,j] + d[j,k]
    bad = d[:, None, :] > through + tol
    for i, j, k in np.argwhere(bad):
        if i != j and j != k:
            violations.append(
                ("triangle", int(i), int(j), int(k), float(d[i, k]), float(through[i, j, k]))
            )

    return ValidationReport(passed=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class AngleValue:
    """A comparison angle in radians, clamped into [0, pi]."""

    radians: float

    def __post_init__(self):
        if not 0.0 <= self.radians <= math.pi:
            raise ParameterError(f"angle {self.radians} outside [0, pi]")

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)


def comparison_angle(space: FiniteMetricSpace, x, z, y) -> AngleValue:
    """Euclidean comparison angle at ``z`` of the triangle with vertices x, z, y.

    This is the angle at the vertex corresponding to ``z`` in the planar
    triangle with the same three side lengths; the cosine is clamped into
    [-1, 1] before arccos so floating-point noise can never leak outside
    [0, pi]. Raises :class:`DegenerateTripleError` when ``x == z`` or
    ``y == z`` (a zero-length leg has no angle).
    """
    xi, zi, yi = space.index(x), space.index(z), space.index(y)
    if xi == zi or yi == zi:
        raise DegenerateTripleError("comparison angle needs x != z and y != z")
    d = space.dist
    a, b, c = d[xi, zi], d[yi, zi], d[xi, yi]
    cos = (a * a + b * b - c * c) / (2.0 * a * b)
    return AngleValue(math.acos(min(1.0, max(-1.0, cos))))


def comparison_angle_matrix(space: FiniteMetricSpace, p, points) -> np.ndarray:
    """Pairwise comparison angles at ``p`` for all pairs from ``points``.

    Returns a symmetric matrix A with A[i, j] the angle at p between
    points[i] and points[j]; the diagonal is 0 by convention.
    """
    pi_ = space.index(p)
    idx = space.indices(points)
    if pi_ in idx:
        raise DegenerateTripleError("p must not be among the points")
    d = space.dist
    legs = d[pi_, idx]
    opp = d[np.ix_(idx, idx)]
    cos = (legs[:, None] ** 2 + legs[None, :] ** 2 - opp**2) / (2.0 * np.outer(legs, legs))
    angles = np.arccos(np.clip(cos, -1.0, 1.0))
    np.fill_diagonal(angles, 0.0)
    return angles


def snowflake_transform(space: FiniteMetricSpace, alpha: float) -> FiniteMetricSpace:
    """Raise every distance to the power ``alpha`` in (0, 1).

    Concavity of t^alpha preserves the triangle inequality, so the output
    is again a valid metric space (same labels, same tolerance).
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"snowflake exponent must lie in (0, 1), got {alpha}")
    return FiniteMetricSpace(space.labels, space.dist**alpha, space.tolerance)


@dataclass(frozen=True)
class SeparatedSubset:
    """An r-separated subset; ``exact`` marks a proven maximum vs a greedy lower bound."""

    points: tuple
    r: float
    exact: bool


def max_separated_subset(
    space: FiniteMetricSpace, r: float, within=None, exact_cap: int = 30
) -> SeparatedSubset:
    """Largest subset with all pairwise distances >= r (within tolerance slack).

    Exact (branch and bound on the conflict graph) for up to ``exact_cap``
    candidate points; farthest-point-first greedy with ``exact=False``
    beyond that. Ties break toward lower indices, so results are
    deterministic. ``within`` restricts the candidate pool.
    """
    if r <= 0:
        raise ParameterError("separation radius r must be positive")
    idx = space.indices(within) if within is not None else list(range(space.n))
    d = space.dist
    tol = space.tolerance
    m = len(idx)
    if m == 0:
        return SeparatedSubset((), r, True)
    sub = d[np.ix_(idx, idx)]
    ok = sub >= r - tol  # pair qualifies for joint membership

    if m <= exact_cap:
        conflict = [0] * m
        for a in range(m):
            mask = 0
            for b in range(m):
                if a != b and not ok[a, b]:
                    mask |= 1 << b
            conflict[a] = mask
        chosen = search.max_conflict_free(m, adj=conflict)
        return SeparatedSubset(tuple(idx[a] for a in chosen), r, True)

    # Greedy: start from the lowest-index point, then repeatedly add the
    # candidate farthest from the chosen set (lowest index on ties).
    chosen = [0]
    mindist = sub[0].copy()
    while True:
        best, best_d = -1, -np.inf
        for a in range(m):
            if a in chosen:
                continue
            if mindist[a] > best_d + tol:
                best, best_d = a, mindist[a]
        if best < 0 or best_d < r - tol:
            break
        chosen.append(best)
        mindist = np.minimum(mindist, sub[best])
    chosen.sort()
    return SeparatedSubset(tuple(idx[a] for a in chosen), r, False)


@dataclass(frozen=True)
class DoublingEstimate:
    """Greedy-cover doubling estimate: max half-radius ball count over tested scales."""

    constant: int
    scales_tested: tuple
    method: str = "greedy-cover"
    covers: tuple = field(default=(), repr=False)  # per scale: (center, radius, picks)
    notices: tuple = ()


def doubling_estimate(space: FiniteMetricSpace, centers, radii) -> DoublingEstimate:
    """Cover each ball B_R(x) greedily by closed half-radius balls.

    For every (center, radius) pair the ball's points are covered by balls
    of radius R/2 whose centers are picked farthest-point-first inside
    B_R(x), starting from x itself; the estimate is the maximum pick count
    over all tested pairs. Ball membership and coverage both use closed
    balls with tolerance slack.
    """
    radii = [float(R) for R in radii]
    if any(R <= 0 for R in radii):
        raise ParameterError("radii must be positive")
    d = space.dist
    tol = space.tolerance
    constant = 0
    scales, covers, notices = [], [], []
    for c in centers:
        ci = space.index(c)
        for R in radii:
            members = np.flatnonzero(d[ci] <= R + tol)
            if members.size == 0:
                notices.append(f"ball around {space.labels[ci]!r} at radius {R} is empty; skipped")
                continue
            picks = [ci]
            mindist = d[ci, members].copy()
            while True:
                uncovered = mindist > R / 2.0 + tol
                if not uncovered.any():
                    break
                far = int(np.flatnonzero(uncovered & (mindist >= mindist[uncovered].max() - tol))[0])
                pick = int(members[far])
                picks.append(pick)
                mindist = np.minimum(mindist, d[pick, members])
            scales.append((space.labels[ci], R))
            covers.append((ci, R, tuple(picks)))
            constant = max(constant, len(picks))
    return DoublingEstimate(
        constant=constant,
        scales_tested=tuple(scales),
        covers=tuple(covers),
        notices=tuple(notices),
    )


def random_metric_space(
    n: int, rng: np.random.Generator, tolerance: float = DEFAULT_TOLERANCE
) -> FiniteMetricSpace:
    """Random valid metric on n points: symmetric noise repaired by shortest-path closure.

    Entries start uniform in [0.5, 1.5], get symmetrized, and are replaced
    by their all-pairs shortest-path closure, which guarantees the triangle
    inequality without rejection sampling while keeping all off-diagonal
    distances positive.
    """
    if n < 1:
        raise ParameterError("need at least one point")
    raw = rng.uniform(0.5, 1.5, size=(n, n))
    raw = (raw + raw.T) / 2.0
    np.fill_diagonal(raw, 0.0)
    closed = floyd_warshall(raw)
    return FiniteMetricSpace(tuple(f"p{i}" for i in range(n)), closed, tolerance)
