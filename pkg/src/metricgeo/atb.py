"""Angular total boundedness: empirical ATB / ATB* certification at a point.

A point p is angularly totally bounded at level epsilon with constant L
when among any L nearby points two of them subtend a comparison angle
below epsilon at p. The geodesic variant (ATB*) replaces the angle test by
a proximity test against chosen geodesics, with threshold

    beta(epsilon) = (1 - cos(epsilon)) * sin(epsilon) / (2 * (1 + sin(epsilon))),

and transfers back to the angle version: any point within
beta(eps) * d(p, x) of a geodesic from p through y subtends an angle
below eps at p. All certification here is empirical, over supplied
candidate sets, never a proof about a whole ball of a continuum space.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import search
from .core import FiniteMetricSpace, comparison_angle_matrix
from .errors import MalformedInputError, ParameterError
from .graphs import GeodesicSet, WeightedGraph

__all__ = [
    "AngleSeparationWitness",
    "AtbParameters",
    "AtbStarResult",
    "LrbEstimate",
    "atb_star_check",
    "calemma_fuzz",
    "compute_beta",
    "lrb_constant_estimate",
    "max_angle_separated",
]

INTERIOR_NOTE = (
    "geodesic minima include edge interiors: on a weighted graph the distance to an "
    "interior point is an endpoint distance plus the offset, so the vertex minimum is exact"
)


def compute_beta(epsilon: float) -> float:
    """(1 - cos eps) * sin eps / (2 * (1 + sin eps)); strictly below 1/4 on (0, pi/2)."""
    if not 0.0 < epsilon < math.pi / 2:
        raise ParameterError(f"epsilon must lie in (0, pi/2), got {epsilon}")
    s = math.sin(epsilon)
    return (1.0 - math.cos(epsilon)) * s / (2.0 * (1.0 + s))


@dataclass(frozen=True)
class AtbParameters:
    """Empirical ATB parameters: angle level, point budget L, radius, derived beta."""

    epsilon: float
    l: int
    r: float = math.inf
    beta: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.l < 1:
            raise ParameterError("L must be a positive integer")
        if not self.r > 0:
            raise ParameterError("R must be positive (math.inf allowed)")
        object.__setattr__(self, "beta", compute_beta(self.epsilon))


@dataclass(frozen=True)
class AngleSeparationWitness:
    """A maximum candidate subset whose pairwise comparison angles at the center are >= epsilon.

    A point satisfies the empirical ATB(epsilon) condition with constant L
    over the candidate pool exactly when ``cardinality < L``. ``exact``
    distinguishes a proven maximum from a greedy lower bound.
    """

    center: int
    points: tuple
    epsilon: float
    exact: bool

    @property
    def cardinality(self) -> int:
        return len(self.points)

    def satisfies_atb(self, l: int) -> bool:
        return self.cardinality < l


def max_angle_separated(
    space: FiniteMetricSpace, p, epsilon: float, candidates, radius=None, exact_cap: int = 30
) -> AngleSeparationWitness:
    """Largest candidate subset pairwise angle-separated (>= epsilon) at p.

    This is a maximum clique in the angle graph, solved exactly up to
    ``exact_cap`` candidates (deterministic, lexicographically smallest
    maximum) and greedily beyond. Candidates outside the open ball of the
    given radius are dropped; p itself must not appear among them.
    """
    if not 0.0 < epsilon < math.pi / 2:
        raise ParameterError(f"epsilon must lie in (0, pi/2), got {epsilon}")
    pi_ = space.index(p)
    idx = space.indices(candidates)
    if pi_ in idx:
        raise ParameterError("p must not appear among the candidates")
    if radius is not None:
        idx = [i for i in idx if space.dist[pi_, i] < radius]
    m = len(idx)
    if m == 0:
        return AngleSeparationWitness(center=pi_, points=(), epsilon=epsilon, exact=True)
    angles = comparison_angle_matrix(space, pi_, idx)
    separated = angles >= epsilon - space.tolerance
    conflict = [0] * m
    for a in range(m):
        mask = 0
        for b in range(m):
            if a != b and not separated[a, b]:
                mask |= 1 << b
        conflict[a] = mask
    if m <= exact_cap:
        chosen, exact = search.max_conflict_free(m, adj=conflict), True
    else:
        chosen, exact = search.greedy_conflict_free(m, adj=conflict), False
    return AngleSeparationWitness(
        center=pi_, points=tuple(idx[a] for a in chosen), epsilon=epsilon, exact=exact
    )


@dataclass(frozen=True)
class AtbStarResult:
    """Outcome of one ATB* test: a close pair (pass) or a separated witness set (fail)."""

    passed: bool
    witness_pair: tuple | None  # positions (i, j) into the target list
    epsilon: float
    beta: float
    targets: tuple
    note: str = INTERIOR_NOTE

    def __bool__(self) -> bool:
        return self.passed


def atb_star_check(
    space: FiniteMetricSpace, geodesics: GeodesicSet, p, epsilon: float, targets
) -> AtbStarResult:
    """Test whether some target lies within beta(eps) * d(p, it) of another's geodesic.

    ``geodesics`` supplies the chosen shortest path from p to each target;
    pass returns the first pair (i, j), i != j, with
    ``min_x in geodesic_j d(y_i, x) <= beta(eps) * d(p, y_i)``. Failure
    means the targets are mutually geodesically separated: a violation
    witness for the ATB* condition at L = len(targets).
    """
    beta = compute_beta(epsilon)
    pi_ = space.index(p)
    ids = space.indices(targets)
    if pi_ in ids:
        raise ParameterError("targets must exclude p")
    d = space.dist
    paths = [geodesics.path(pi_, y) for y in ids]
    for i, yi in enumerate(ids):
        allowance = beta * d[pi_, yi] + space.tolerance
        for j in range(len(ids)):
            if i == j:
                continue
            if min(d[yi, w] for w in paths[j]) <= allowance:
                return AtbStarResult(
                    passed=True,
                    witness_pair=(i, j),
                    epsilon=epsilon,
                    beta=beta,
                    targets=tuple(ids),
                )
    return AtbStarResult(
        passed=False, witness_pair=None, epsilon=epsilon, beta=beta, targets=tuple(ids)
    )


def calemma_fuzz(dimension: int, epsilon: float, trials: int, seed: int) -> int:
    """Fuzz the geodesic-proximity angle bound; returns the violation count (expect 0).

    Random Euclidean configurations: x' on the segment [p, y], then x with
    d(x, x') <= beta(eps) * d(p, x) by rejection sampling. Each accepted
    configuration must satisfy comparison angle(x, p, y) < eps.
    Reproducible for a fixed seed.
    """
    if not 2 <= dimension <= 4:
        raise ParameterError("dimension must be 2, 3, or 4")
    if trials < 1:
        raise ParameterError("need at least one trial")
    beta = compute_beta(epsilon)
    rng = np.random.default_rng(seed)

    p = rng.normal(size=(trials, dimension))
    y = rng.normal(size=(trials, dimension))
    while True:
        degenerate = np.linalg.norm(y - p, axis=1) < 1e-9
        if not degenerate.any():
            break
        y[degenerate] = rng.normal(size=(int(degenerate.sum()), dimension))

    tpar = rng.uniform(size=trials)
    while True:
        tiny = tpar < 1e-9
        if not tiny.any():
            break
        tpar[tiny] = rng.uniform(size=int(tiny.sum()))
    xprime = p + tpar[:, None] * (y - p)
    leg = np.linalg.norm(xprime - p, axis=1)

    x = np.empty_like(p)
    pending = np.arange(trials)
    for _ in range(200):
        if pending.size == 0:
            break
        k = pending.size
        direction = rng.normal(size=(k, dimension))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radius = rng.uniform(size=k) * beta * leg[pending]
        cand = xprime[pending] + radius[:, None] * direction
        ok = np.linalg.norm(cand - xprime[pending], axis=1) <= beta * np.linalg.norm(
            cand - p[pending], axis=1
        )
        x[pending[ok]] = cand[ok]
        pending = pending[~ok]
    if pending.size:
        raise MalformedInputError("rejection sampling failed to converge")

    a = np.linalg.norm(x - p, axis=1)
    b = np.linalg.norm(y - p, axis=1)
    c = np.linalg.norm(x - y, axis=1)
    cos = np.clip((a**2 + b**2 - c**2) / (2.0 * a * b), -1.0, 1.0)
    return int(np.count_nonzero(np.arccos(cos) >= epsilon))


@dataclass(frozen=True)
class LrbEstimate:
    """Smallest K >= 1 with d(g1(t L1), g2(t L2)) <= K t d(g1(L1), g2(L2)) over the samples."""

    center: int
    horizon: float
    constant: float
    samples: int


def _edge_interior_max(a: float, b: float, length: float) -> float:
    # max over the edge of the distance from a fixed point whose endpoint
    # distances are a and b
    if abs(a - b) <= length:
        return (a + b + length) / 2.0
    return min(a, b) + length


def _locate(path, cum, arc):
    """Position at arc length along a path: (u, v, offset, segment length)."""
    if arc <= 0:
        seg = 0
    elif arc >= cum[-1]:
        seg = len(path) - 2
    else:
        seg = bisect_right(cum, arc) - 1
        seg = min(seg, len(path) - 2)
    u, v = path[seg], path[seg + 1]
    return u, v, arc - cum[seg], cum[seg + 1] - cum[seg]


def _position_distance(D, pos1, pos2) -> float:
    u1, v1, o1, l1 = pos1
    u2, v2, o2, l2 = pos2
    best = min(
        o1 + o2 + D[u1, u2],
        o1 + (l2 - o2) + D[u1, v2],
        (l1 - o1) + o2 + D[v1, u2],
        (l1 - o1) + (l2 - o2) + D[v1, v2],
    )
    if u1 == u2 and v1 == v2:
        best = min(best, abs(o1 - o2))
    elif u1 == v2 and v1 == u2:
        best = min(best, abs(o1 - (l2 - o2)))
    return float(best)


def lrb_constant_estimate(
    graph: WeightedGraph,
    p: int,
    horizon: float,
    t_samples: int = 64,
    geodesics: GeodesicSet | None = None,
    starts=None,
) -> LrbEstimate:
    """Empirical linear-divergence constant for geodesic pairs inside a ball.

    Enumerates chosen geodesics contained in the closed ball of the given
    horizon around p, pairs them by common start point, and evaluates the
    divergence ratio on a uniform t-grid plus every vertex breakpoint of
    either path (distances along paths are piecewise linear, so the
    breakpoints carry the extrema; the grid is defense in depth). Points at
    fractional parameters are interpolated along edges by arc length.
    """
    if horizon <= 0:
        raise ParameterError("horizon must be positive")
    if t_samples < 2:
        raise ParameterError("need at least two t samples")
    geos = geodesics if geodesics is not None else GeodesicSet(graph)
    D = graph.distance_matrix()
    tol = graph.tolerance
    pi_ = int(p)
    in_ball = [v for v in range(graph.n_vertices) if D[pi_, v] <= horizon + tol]
    start_pool = [int(s) for s in starts] if starts is not None else in_ball
    grid = np.linspace(0.0, 1.0, t_samples)

    constant = 1.0
    samples = 0
    for s in start_pool:
        if D[pi_, s] > horizon + tol:
            continue
        kept = []
        for a in in_ball:
            if a == s:
                continue
            path = geos.path(s, a)
            cum = geos.cumulative(path)
            inside = all(D[pi_, w] <= horizon + tol for w in path) and all(
                _edge_interior_max(D[pi_, path[k]], D[pi_, path[k + 1]], cum[k + 1] - cum[k])
                <= horizon + tol
                for k in range(len(path) - 1)
            )
            if inside:
                kept.append((a, path, cum))
        for (a, pa, ca), (b, pb, cb) in combinations(kept, 2):
            ends = D[a, b]
            if ends <= tol:
                continue
            la, lb = ca[-1], cb[-1]
            ts = np.union1d(grid, np.union1d(ca / la, cb / lb))
            ts = ts[(ts > 0.0) & (ts <= 1.0)]
            for t in ts:
                pos1 = _locate(pa, ca, t * la)
                pos2 = _locate(pb, cb, t * lb)
                gap = _position_distance(D, pos1, pos2)
                # smallest K with gap <= K * t * ends + tol at this sample
                ratio = (gap - tol) / (t * ends)
                if ratio > constant:
                    constant = ratio
            samples += 1
    if samples == 0:
        raise MalformedInputError("no geodesic pairs within the horizon")
    return LrbEstimate(center=pi_, horizon=horizon, constant=float(constant), samples=samples)
