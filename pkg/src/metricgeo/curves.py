"""Discrete curves: self-contractedness, length growth, and descent trajectories.

A discrete curve is an ordered point sequence, either indices into a
FiniteMetricSpace or coordinates in R^n under a tagged norm (optionally
snowflaked: d = scale * base^alpha, which is how the Heisenberg-axis curve
is carried at large sample counts without a dense matrix). A curve is
self-contracted when, for every target parameter, the distance to the
target never increases along the earlier part of the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FiniteMetricSpace
from .errors import MalformedInputError, ParameterError, StepSizeError
from . import sra as _sra

__all__ = [
    "DescentSpec",
    "DiscreteCurve",
    "LengthReport",
    "OBJECTIVES",
    "QuasiConvexReport",
    "SelfContractedReport",
    "curve_length",
    "extract_sra_from_curve",
    "gradient_descent_trajectory",
    "is_self_contracted",
    "quasi_convexity_sample",
]

DESCENT_TOLERANCE = 1e-7  # iterative arithmetic accumulates more noise than exact inputs


def norm_distances(diffs: np.ndarray, norm) -> np.ndarray:
    """Row-wise length of difference vectors under a norm tag (l1 | l2 | linf | p)."""
    if isinstance(norm, str):
        tag = norm.lower()
        if tag == "l1":
            return np.abs(diffs).sum(axis=-1)
        if tag == "l2":
            return np.linalg.norm(diffs, axis=-1)
        if tag == "linf":
            return np.abs(diffs).max(axis=-1)
        raise ParameterError(f"unknown norm tag {norm!r}")
    p = float(norm)
    if p < 1:
        raise ParameterError(f"p-norm needs p >= 1, got {p}")
    return (np.abs(diffs) ** p).sum(axis=-1) ** (1.0 / p)


@dataclass(frozen=True)
class DiscreteCurve:
    """Ordered point sequence backed by a space or by coordinates with a norm tag.

    Consecutive duplicate points are permitted (constant stretches). For
    coordinate curves the metric is ``scale * |x - y|_norm ** snowflake_alpha``;
    the defaults give the plain norm distance.
    """

    space: FiniteMetricSpace | None = None
    order: tuple | None = None
    coords: np.ndarray | None = None
    norm: object = "l2"
    snowflake_alpha: float = 1.0
    scale: float = 1.0
    tolerance: float = 1e-9

    def __post_init__(self):
        space_backed = self.space is not None or self.order is not None
        coord_backed = self.coords is not None
        if space_backed == coord_backed:
            raise MalformedInputError("curve needs either (space, order) or coords, not both")
        if space_backed:
            if self.space is None or self.order is None:
                raise MalformedInputError("space-backed curve needs both space and order")
            order = tuple(self.space.index(p) for p in self.order)
            object.__setattr__(self, "order", order)
        else:
            c = np.asarray(self.coords, dtype=float)
            if c.ndim == 1:
                c = c[:, None]
            if c.ndim != 2:
                raise MalformedInputError("coords must be a 2d array of points")
            norm_distances(c[:1] - c[:1], self.norm)  # validate the tag early
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)
        if not 0.0 < self.snowflake_alpha <= 1.0:
            raise ParameterError("snowflake_alpha must lie in (0, 1]")
        if not self.scale > 0:
            raise ParameterError("scale must be positive")

    def __len__(self) -> int:
        return len(self.order) if self.order is not None else len(self.coords)

    def dists_to(self, j: int, idx) -> np.ndarray:
        """Distances from curve point j to the curve points at positions idx."""
        idx = np.asarray(idx, dtype=np.intp)
        if self.space is not None:
            ids = np.asarray(self.order, dtype=np.intp)
            return self.space.dist[ids[idx], ids[j]]
        base = norm_distances(self.coords[idx] - self.coords[j], self.norm)
        if self.snowflake_alpha != 1.0:
            base = base**self.snowflake_alpha
        return self.scale * base

    def dist(self, i: int, j: int) -> float:
        return float(self.dists_to(j, np.array([i]))[0])

    def step_lengths(self) -> np.ndarray:
        """Consecutive distances along the curve."""
        n = len(self)
        if n < 2:
            return np.zeros(0)
        if self.space is not None:
            ids = np.asarray(self.order, dtype=np.intp)
            return self.space.dist[ids[:-1], ids[1:]]
        base = norm_distances(np.diff(self.coords, axis=0), self.norm)
        if self.snowflake_alpha != 1.0:
            base = base**self.snowflake_alpha
        return self.scale * base

    def distance_submatrix(self, positions) -> np.ndarray:
        """Pairwise distance matrix among the curve points at the given positions."""
        positions = list(positions)
        out = np.zeros((len(positions), len(positions)))
        for row, j in enumerate(positions):
            out[row] = self.dists_to(j, np.asarray(positions, dtype=np.intp))
        return (out + out.T) / 2.0

    def subsample(self, positions) -> "DiscreteCurve":
        """Curve restricted to the given (order-preserving) positions."""
        positions = list(positions)
        if self.space is not None:
            return DiscreteCurve(
                space=self.space,
                order=tuple(self.order[i] for i in positions),
                tolerance=self.tolerance,
            )
        return DiscreteCurve(
            coords=self.coords[positions],
            norm=self.norm,
            snowflake_alpha=self.snowflake_alpha,
            scale=self.scale,
            tolerance=self.tolerance,
        )


@dataclass(frozen=True)
class SelfContractedReport:
    passed: bool
    witness: tuple | None  # (t1, t2, t3) with d(curve[t2], curve[t3]) > d(curve[t1], curve[t3])

    def __bool__(self) -> bool:
        return self.passed


def is_self_contracted(curve: DiscreteCurve) -> SelfContractedReport:
    """Check self-contractedness: d(., target) is nonincreasing before each target.

    The scan is quadratic: for each target position t3 the distance column
    over t <= t3 must be nonincreasing, which is equivalent to the cubic
    all-triples definition (any non-consecutive increase implies a
    consecutive one). Returns the first violating triple in scan order,
    always of the form (t, t+1, t3). Comparisons use the curve tolerance.
    """
    n = len(curve)
    if n == 0:
        raise MalformedInputError("empty curve")
    tol = curve.tolerance
    for t3 in range(2, n):
        col = curve.dists_to(t3, np.arange(t3))
        rising = np.flatnonzero(col[1:] > col[:-1] + tol)
        if rising.size:
            t1 = int(rising[0])
            return SelfContractedReport(passed=False, witness=(t1, t1 + 1, t3))
    return SelfContractedReport(passed=True, witness=None)


@dataclass(frozen=True)
class LengthReport:
    polygonal_length: float
    prefix_lengths: np.ndarray  # nondecreasing, one entry per curve point, last = total


def curve_length(curve: DiscreteCurve) -> LengthReport:
    """Polygonal length (sum of consecutive distances) with the running prefix record."""
    if len(curve) < 2:
        raise MalformedInputError("length needs at least two curve points")
    steps = curve.step_lengths()
    prefix = np.concatenate([[0.0], np.cumsum(steps)])
    return LengthReport(polygonal_length=float(prefix[-1]), prefix_lengths=prefix)


def _deduplicate(curve: DiscreteCurve) -> list[int]:
    """First-occurrence positions of distinct curve points (distance-0 duplicates dropped)."""
    kept: list[int] = []
    for pos in range(len(curve)):
        if not kept:
            kept.append(pos)
            continue
        gaps = curve.dists_to(pos, np.asarray(kept, dtype=np.intp))
        if np.all(gaps > curve.tolerance):
            kept.append(pos)
    return kept


def extract_sra_from_curve(
    curve: DiscreteCurve, alpha: float, target_size: int, exact_cap: int = 40
):
    """Search the curve image for an SRA(alpha) subset of the requested size.

    Returns curve positions (a tuple) or None. Distinct image points are
    searched exactly through :func:`metricgeo.sra.max_sra_subset` on the
    induced submetric; long curves are windowed at the exact-search cap
    with half-overlapping windows, with a greedy full-image pass as the
    fallback. Any subset of an SRA set is again SRA, so oversized finds
    are trimmed to the first ``target_size`` positions.
    """
    if target_size < 1:
        raise ParameterError("target size must be positive")
    positions = _deduplicate(curve)
    m = len(positions)
    if m < target_size:
        return None

    def induced(pos_window):
        matrix = curve.distance_submatrix(pos_window)
        labels = tuple(f"t{p}" for p in pos_window)
        return FiniteMetricSpace(labels, matrix, curve.tolerance)

    if m <= exact_cap:
        result = _sra.max_sra_subset(induced(positions), alpha, mode="exact")
        if len(result.points) >= target_size:
            return tuple(positions[i] for i in result.points[:target_size])
        return None

    stride = max(1, exact_cap // 2)
    offsets = list(range(0, m - exact_cap + 1, stride))
    if offsets[-1] != m - exact_cap:
        offsets.append(m - exact_cap)
    for off in offsets:
        window = positions[off : off + exact_cap]
        result = _sra.max_sra_subset(induced(window), alpha, mode="exact")
        if len(result.points) >= target_size:
            return tuple(window[i] for i in result.points[:target_size])
    result = _sra.max_sra_subset(induced(positions), alpha, mode="greedy")
    if len(result.points) >= target_size:
        return tuple(positions[i] for i in result.points[:target_size])
    return None


# ---------------------------------------------------------------------------
# Gradient descent trajectories and quasi-convexity sampling


def _objective_sqnorm(x: np.ndarray) -> np.ndarray:
    return (x**2).sum(axis=-1)


def _objective_sin_first(x: np.ndarray) -> np.ndarray:
    return np.sin(x[..., 0])


def _objective_smoothed_dist(x: np.ndarray) -> np.ndarray:
    # smoothed distance to the closed unit ball; quasi-convex (sublevels are balls)
    excess = np.maximum(np.linalg.norm(x, axis=-1) - 1.0, 0.0)
    return np.sqrt(excess**2 + 1e-6)


OBJECTIVES = {
    "sqnorm": _objective_sqnorm,
    "sin_first": _objective_sin_first,
    "smoothed_dist_unit_ball": _objective_smoothed_dist,
}


@dataclass(frozen=True)
class DescentSpec:
    """Gradient descent setup: quadratic form (or named objective), step, and measuring norm.

    The objective is f(x) = x^T Q x / 2 for a symmetric positive
    semidefinite Q; the name "sqnorm" stands for the identity form. The
    gradient step is always Euclidean; ``norm`` only tags how the
    resulting curve measures distances, which is the probe for descent
    measured in non-Euclidean norms.
    """

    objective: object
    start: tuple
    step: float
    iterations: int
    norm: object = "l2"

    def matrix(self) -> np.ndarray:
        dim = len(self.start)
        if isinstance(self.objective, str):
            if self.objective != "sqnorm":
                raise ParameterError(f"unknown named descent objective {self.objective!r}")
            return np.eye(dim)
        q = np.asarray(self.objective, dtype=float)
        if q.shape != (dim, dim):
            raise MalformedInputError(f"quadratic matrix shape {q.shape} does not fit start")
        scale = 1.0 + np.abs(q).max()
        if np.abs(q - q.T).max() > 1e-9 * scale:
            raise MalformedInputError("quadratic matrix must be symmetric")
        q = (q + q.T) / 2.0
        if np.linalg.eigvalsh(q).min() < -1e-9 * scale:
            raise MalformedInputError("quadratic matrix must be positive semidefinite")
        return q


def _power_iteration_lmax(q: np.ndarray, sweeps: int = 500) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by deterministic power iteration."""
    n = q.shape[0]
    v = np.ones(n) + np.arange(n) / max(n, 1)  # fixed start, not orthogonal to anything likely
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(sweeps):
        w = q @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam = float(v @ (q @ v))
    return lam


def gradient_descent_trajectory(spec: DescentSpec) -> DiscreteCurve:
    """Run x_{k+1} = x_k - h * grad f(x_k) and return the iterate polyline.

    The step must satisfy h <= 1 / lambda_max (checked numerically by
    power iteration); larger steps raise with the computed bound. The
    returned curve carries the spec's measuring norm and the descent
    tolerance of 1e-7.
    """
    if spec.step <= 0:
        raise ParameterError("step size must be positive")
    if spec.iterations < 1:
        raise ParameterError("need at least one iteration")
    q = spec.matrix()
    lam = _power_iteration_lmax(q)
    if lam > 0 and spec.step > 1.0 / lam * (1 + 1e-9):
        raise StepSizeError(
            f"step {spec.step} exceeds the stability bound 1/lambda_max = {1.0 / lam:.6g}"
        )
    x = np.asarray(spec.start, dtype=float)
    points = np.empty((spec.iterations + 1, x.size))
    points[0] = x
    for k in range(spec.iterations):
        x = x - spec.step * (q @ x)
        points[k + 1] = x
    return DiscreteCurve(coords=points, norm=spec.norm, tolerance=DESCENT_TOLERANCE)


@dataclass(frozen=True)
class QuasiConvexReport:
    passed: bool
    counterexample: tuple | None  # (x, y, t) with f between them above both values
    trials: int
    seed: int

    def __bool__(self) -> bool:
        return self.passed


def quasi_convexity_sample(
    objective,
    dim: int,
    trials: int,
    seed: int,
    norm: object = "l2",
    box: tuple = (-3.0, 3.0),
    tolerance: float = 1e-9,
) -> QuasiConvexReport:
    """Sample f((1-t)x + ty) <= max(f(x), f(y)) on random segment triples.

    Geodesics are straight segments (the normed-space case), so the norm
    tag does not affect the test points. ``objective`` is a callable on
    row-stacked points or a name from :data:`OBJECTIVES`.
    """
    if trials < 1:
        raise ParameterError("need at least one trial")
    f = OBJECTIVES[objective] if isinstance(objective, str) else objective
    norm_distances(np.zeros((1, dim)), norm)  # validate the tag
    rng = np.random.default_rng(seed)
    lo, hi = box
    xs = rng.uniform(lo, hi, size=(trials, dim))
    ys = rng.uniform(lo, hi, size=(trials, dim))
    ts = rng.uniform(size=trials)
    mids = (1.0 - ts)[:, None] * xs + ts[:, None] * ys
    fx, fy, fm = np.asarray(f(xs)), np.asarray(f(ys)), np.asarray(f(mids))
    bad = fm > np.maximum(fx, fy) + tolerance
    if not bad.any():
        return QuasiConvexReport(passed=True, counterexample=None, trials=trials, seed=seed)
    k = int(np.argmax(bad))
    return QuasiConvexReport(
        passed=False,
        counterexample=(tuple(xs[k]), tuple(ys[k]), float(ts[k])),
        trials=trials,
        seed=seed,
    )
