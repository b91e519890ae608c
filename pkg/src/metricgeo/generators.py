"""Generators for the benchmark spaces: Laakso graphs, broom trees, the
Heisenberg-group axis, integer-lattice word metrics, and random normed samples.

These are the concrete spaces on which the rough-angle and
self-contractedness machinery is exercised: the Laakso family carries
designated SRA(3/5) point sets, broom-tree tips form an ultrametric (hence
SRA for every level), and the Heisenberg axis is a metric half-power
snowflake of the line, a bounded self-contracted curve of infinite length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FiniteMetricSpace
from .curves import DiscreteCurve, norm_distances
from .errors import MalformedInputError, ParameterError
from .graphs import WeightedGraph

__all__ = [
    "BroomTree",
    "LaaksoGraph",
    "StableNormEstimate",
    "WordMetricBall",
    "broom_tree",
    "cayley_ball",
    "heisenberg_axis",
    "heisenberg_axis_curve",
    "laakso_graph",
    "laakso_pair_distance",
    "laakso_points_space",
    "laakso_sra_points",
    "normed_sample",
    "normed_space_from_points",
    "stable_norm_estimate",
    "word_ball_space",
]


# ---------------------------------------------------------------------------
# Laakso graphs


@dataclass
class LaaksoGraph:
    """Level-N Laakso graph: 6^N edges of length 4^-N, diameter 1.

    Built by substituting every directed edge with a series-parallel
    diamond (entry copy, two parallel chains of two copies, exit copy) N
    times, starting from a single unit edge directed away from the root.
    ``out_lists[v]`` holds v's outgoing neighbors; a branching vertex has
    exactly two, position 0 tagged left and position 1 tagged right.
    """

    level: int
    graph: WeightedGraph
    root: int
    top: int
    out_lists: tuple
    edge_length: float

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    def monotone_walk(self, start: int, steps: int, branch: str) -> list[int]:
        """Follow outgoing edges for ``steps`` edges, taking one side at branches."""
        if branch not in ("left", "right"):
            raise ParameterError("branch must be 'left' or 'right'")
        pick = 0 if branch == "left" else -1
        path = [start]
        cur = start
        for _ in range(steps):
            outs = self.out_lists[cur]
            if not outs:
                raise MalformedInputError(f"walk ran off the top at vertex {cur}")
            cur = outs[pick]
            path.append(cur)
        return path

    def never_right_geodesic(self) -> list[int]:
        """The root-to-top geodesic that never branches right (4^level edges)."""
        return self.monotone_walk(self.root, 4**self.level, "left")

    def to_metric_space(self, max_vertices: int = 7000) -> FiniteMetricSpace:
        if self.n_vertices > max_vertices:
            raise ParameterError(
                f"full distance matrix on {self.n_vertices} vertices exceeds the cap "
                f"{max_vertices}; use subspace_on or laakso_points_space"
            )
        return self.graph.to_metric_space()

    def subspace_on(self, vertices, labels=None) -> FiniteMetricSpace:
        """Induced metric on chosen vertices via single-source searches."""
        vertices = [int(v) for v in vertices]
        rows = self.graph.distances_from(vertices)
        sub = rows[:, vertices]
        labels = tuple(labels) if labels is not None else tuple(f"v{v}" for v in vertices)
        return FiniteMetricSpace(labels, sub, self.graph.tolerance)


def laakso_graph(level: int, cap: int = 6) -> LaaksoGraph:
    """Construct the level-N Laakso graph (N <= cap; 6^8 edges would be ~1.7M)."""
    if level < 0:
        raise ParameterError("level must be nonnegative")
    if level > cap:
        raise ParameterError(f"level {level} exceeds the cap {cap}")
    out_lists: list[list[int]] = [[1], []]
    for _ in range(level):
        new_out: list[list[int]] = [[] for _ in range(len(out_lists))]
        for u, outs in enumerate(out_lists):
            new_out[u] = [0] * len(outs)  # placeholders, filled per replaced edge
        for u, outs in enumerate(out_lists):
            for pos, v in enumerate(outs):
                base = len(new_out)
                j1, ml, mr, j2 = base, base + 1, base + 2, base + 3
                new_out.extend([[ml, mr], [j2], [j2], [v]])
                new_out[u][pos] = j1
        out_lists = new_out
    length = 4.0**-level
    edges = tuple(
        (u, v, length) for u, outs in enumerate(out_lists) for v in outs
    )
    graph = WeightedGraph(n_vertices=len(out_lists), edges=edges)
    return LaaksoGraph(
        level=level,
        graph=graph,
        root=0,
        top=1,
        out_lists=tuple(tuple(o) for o in out_lists),
        edge_length=length,
    )


def laakso_sra_points(graph: LaaksoGraph, n: int) -> tuple[list[int], list[int]]:
    """The designated SRA(3/5) vertices x_1..x_n and their anchors y_1..y_n.

    Anchor y_i sits at arc length 1/4 + ... + 1/4^i along the never-right
    root geodesic; x_i is the endpoint of the never-left walk of length
    4^-i out of y_i. Requires n <= level so all of these are vertices.
    All arc positions are integer multiples of the edge length, so the
    walks are stepped in exact integer counts.
    """
    if not 1 <= n <= graph.level:
        raise ParameterError(f"need 1 <= n <= level ({graph.level}), got {n}")
    spine = graph.never_right_geodesic()
    xs, ys = [], []
    for i in range(1, n + 1):
        steps_to_anchor = sum(4 ** (graph.level - m) for m in range(1, i + 1))
        y = spine[steps_to_anchor]
        x = graph.monotone_walk(y, 4 ** (graph.level - i), "right")[-1]
        ys.append(y)
        xs.append(x)
    return xs, ys


def laakso_pair_distance(i: int, k: int) -> float:
    """Closed-form d(x_i, x_k) = 4^-i + (4^-(i+1) + ... + 4^-k) + 4^-k for i < k."""
    if i == k:
        return 0.0
    i, k = min(i, k), max(i, k)
    return 4.0**-i + sum(4.0**-m for m in range(i + 1, k + 1)) + 4.0**-k


def laakso_points_space(graph: LaaksoGraph, n: int):
    """Induced metric on the designated SRA points, plus construction metadata."""
    xs, ys = laakso_sra_points(graph, n)
    space = graph.subspace_on(xs, labels=tuple(f"x{i}" for i in range(1, n + 1)))
    meta = {
        "construction": {"family": "laakso", "level": graph.level, "sra_points": n},
        "anchors": {f"y{i}": int(y) for i, y in enumerate(ys, start=1)},
        "vertices": {f"x{i}": int(x) for i, x in enumerate(xs, start=1)},
        "designated": {"sra_points": list(range(n))},
    }
    return space, meta


# ---------------------------------------------------------------------------
# Broom trees


@dataclass
class BroomTree:
    """Spine [0, 1] with a branch of height t_i attached at (t_i, 0), intrinsic metric.

    Realized on the finite point set {root, branch points, tips, spine end};
    tips satisfy d(y_i, y_j) = 2 * max(t_i, t_j) for i != j, an ultrametric.
    ``graph`` is the same tree as a weighted graph (vertex order matches the
    space), for the geodesic-based checks.
    """

    heights: tuple
    space: FiniteMetricSpace
    graph: WeightedGraph
    root_index: int
    spine_indices: tuple
    tip_indices: tuple

    def tip_curve(self, count: int | None = None) -> DiscreteCurve:
        """The discrete curve y_1, y_2, ... through the first ``count`` tips."""
        order = self.tip_indices[: count if count is not None else len(self.tip_indices)]
        return DiscreteCurve(space=self.space, order=order)


def _broom_heights(sequence, n: int | None):
    if isinstance(sequence, str):
        if n is None or n < 1:
            raise ParameterError("named sequences need a positive count n")
        if sequence == "dyadic":
            return tuple(2.0 ** (1 - i) for i in range(1, n + 1))
        if sequence == "harmonic":
            return tuple(1.0 / i for i in range(1, n + 1))
        raise ParameterError(f"unknown sequence {sequence!r} (dyadic | harmonic)")
    heights = tuple(float(t) for t in sequence)
    if not heights:
        raise ParameterError("need at least one branch height")
    if any(not 0.0 < t <= 1.0 for t in heights):
        raise ParameterError("branch heights must lie in (0, 1]")
    if any(a <= b for a, b in zip(heights, heights[1:])):
        raise ParameterError("branch heights must be strictly decreasing")
    return heights


def broom_tree(sequence, n: int | None = None, tolerance: float = 1e-9) -> BroomTree:
    """Broom tree for a strictly decreasing height sequence (or 'dyadic' / 'harmonic').

    Point order: root, spine end (only when t_1 < 1), branch points
    s_1..s_n, tips y_1..y_n. Tip-tip distances are computed as
    2 * max(t_i, t_j) directly, which is the intrinsic path length and
    exact in floating point.
    """
    heights = _broom_heights(sequence, n)
    k = len(heights)
    labels = ["root"]
    spine_pos = [0.0]
    if heights[0] < 1.0:
        labels.append("end")
        spine_pos.append(1.0)
    spine_from = len(labels)
    labels.extend(f"s{i}" for i in range(1, k + 1))
    spine_pos.extend(heights)
    tips_from = len(labels)
    labels.extend(f"y{i}" for i in range(1, k + 1))

    pos = np.array(spine_pos)
    t = np.array(heights)
    m = len(labels)
    d = np.zeros((m, m))
    # spine-spine, spine-tip, tip-tip blocks of the intrinsic tree metric
    d[:tips_from, :tips_from] = np.abs(pos[:, None] - pos[None, :])
    spine_tip = np.abs(pos[:, None] - t[None, :]) + t[None, :]
    d[:tips_from, tips_from:] = spine_tip
    d[tips_from:, :tips_from] = spine_tip.T
    tip_tip = 2.0 * np.maximum.outer(t, t)
    np.fill_diagonal(tip_tip, 0.0)
    d[tips_from:, tips_from:] = tip_tip

    space = FiniteMetricSpace(tuple(labels), d, tolerance)
    on_spine = sorted(range(tips_from), key=lambda i: spine_pos[i])
    edges = [
        (a, b, spine_pos[b] - spine_pos[a]) for a, b in zip(on_spine, on_spine[1:])
    ]
    edges.extend((spine_from + i, tips_from + i, heights[i]) for i in range(k))
    graph = WeightedGraph(
        n_vertices=m, edges=tuple(edges), labels=tuple(labels), tolerance=tolerance
    )
    return BroomTree(
        heights=heights,
        space=space,
        graph=graph,
        root_index=0,
        spine_indices=tuple(range(spine_from, spine_from + k)),
        tip_indices=tuple(range(tips_from, tips_from + k)),
    )


# ---------------------------------------------------------------------------
# Heisenberg axis

HEISENBERG_SCALE = 2.0 * math.sqrt(math.pi)


def heisenberg_axis(steps: int, span=(0.0, 1.0), max_steps: int = 2000) -> FiniteMetricSpace:
    """Vertical-axis samples of the Heisenberg group: d(s, t) = 2 sqrt(pi |s - t|).

    ``steps`` uniform steps over the span give steps + 1 sample points, so
    the polygonal length over [0, 1] is exactly steps * 2 sqrt(pi / steps)
    = 2 sqrt(pi * steps). The axis is the half-power snowflake of the line
    scaled by 2 sqrt(pi). Dense matrices are capped; use
    :func:`heisenberg_axis_curve` for large step counts.
    """
    if steps < 1:
        raise ParameterError("need at least one step")
    if steps > max_steps:
        raise ParameterError(
            f"{steps} steps would need a dense {(steps + 1)}^2 matrix; "
            "use heisenberg_axis_curve instead"
        )
    lo, hi = float(span[0]), float(span[1])
    if not hi > lo:
        raise ParameterError("span must be increasing")
    params = np.linspace(lo, hi, steps + 1)
    d = HEISENBERG_SCALE * np.sqrt(np.abs(params[:, None] - params[None, :]))
    return FiniteMetricSpace(tuple(f"z{i}" for i in range(steps + 1)), d, 1e-9)


def heisenberg_axis_curve(steps: int, span=(0.0, 1.0)) -> DiscreteCurve:
    """The same axis samples as a lazily-evaluated curve (no dense matrix)."""
    if steps < 1:
        raise ParameterError("need at least one step")
    lo, hi = float(span[0]), float(span[1])
    if not hi > lo:
        raise ParameterError("span must be increasing")
    params = np.linspace(lo, hi, steps + 1)
    return DiscreteCurve(
        coords=params[:, None], norm="l2", snowflake_alpha=0.5, scale=HEISENBERG_SCALE
    )


# ---------------------------------------------------------------------------
# Word metrics on integer lattices


def _lattice_spans_everything(vectors: list[tuple[int, ...]], dim: int) -> bool:
    """True when the integer lattice generated by the vectors is all of Z^dim."""
    rows = [list(v) for v in vectors]
    index = 1
    for col in range(dim):
        # Euclidean elimination on one column of the integer row span
        while True:
            nonzero = [r for r in range(col, len(rows)) if rows[r][col] != 0]
            if not nonzero:
                return False
            r0 = min(nonzero, key=lambda r: abs(rows[r][col]))
            rows[col], rows[r0] = rows[r0], rows[col]
            pivot = rows[col][col]
            done = True
            for r in range(col + 1, len(rows)):
                if rows[r][col] != 0:
                    q = rows[r][col] // pivot
                    rows[r] = [a - q * b for a, b in zip(rows[r], rows[col])]
                    if rows[r][col] != 0:
                        done = False
            if done:
                break
        index *= abs(rows[col][col])
    return index == 1


@dataclass
class WordMetricBall:
    """Word-metric distances from the identity, out to a radius, by breadth-first search."""

    generators: tuple
    radius: int
    distances: dict

    def distance(self, g) -> int:
        g = tuple(int(c) for c in g)
        if g not in self.distances:
            raise MalformedInputError(f"{g} lies outside the computed radius {self.radius}")
        return self.distances[g]

    def elements(self) -> list[tuple]:
        return sorted(self.distances)


def _normalize_generators(generators) -> tuple:
    gens = tuple(tuple(int(c) for c in g) for g in generators)
    if not gens:
        raise ParameterError("need at least one generator")
    dim = len(gens[0])
    if any(len(g) != dim for g in gens):
        raise MalformedInputError("generators must share one dimension")
    if any(all(c == 0 for c in g) for g in gens):
        raise MalformedInputError("the zero vector cannot be a generator")
    gen_set = set(gens)
    missing = [g for g in gens if tuple(-c for c in g) not in gen_set]
    if missing:
        raise MalformedInputError(f"generator set is not symmetric: missing negatives of {missing}")
    if not _lattice_spans_everything(list(gen_set), dim):
        raise MalformedInputError("generators do not generate the full integer lattice")
    return gens


def cayley_ball(generators, radius: int, node_cap: int = 2_000_000) -> WordMetricBall:
    """Breadth-first search of the word metric from the origin out to ``radius``."""
    if radius < 0:
        raise ParameterError("radius must be nonnegative")
    gens = _normalize_generators(generators)
    origin = (0,) * len(gens[0])
    distances = {origin: 0}
    frontier = [origin]
    for layer in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for step in gens:
                h = tuple(a + b for a, b in zip(g, step))
                if h not in distances:
                    distances[h] = layer
                    nxt.append(h)
        if len(distances) > node_cap:
            raise ParameterError(f"word-metric ball exceeds the node cap {node_cap}")
        frontier = nxt
    return WordMetricBall(generators=gens, radius=radius, distances=distances)


def word_ball_space(generators, radius: int, tolerance: float = 1e-9) -> FiniteMetricSpace:
    """The radius-``radius`` ball as a metric space under the group-invariant word metric.

    d(g, h) = word length of h - g, read from a ball of radius 2 * radius.
    """
    outer = cayley_ball(generators, 2 * radius)
    elements = [g for g in sorted(outer.distances) if outer.distances[g] <= radius]
    m = len(elements)
    d = np.zeros((m, m))
    for a in range(m):
        for b in range(a + 1, m):
            diff = tuple(x - y for x, y in zip(elements[b], elements[a]))
            d[a, b] = d[b, a] = outer.distances[diff]
    labels = tuple(",".join(str(c) for c in g) for g in elements)
    return FiniteMetricSpace(labels, d, tolerance)


@dataclass(frozen=True)
class StableNormEstimate:
    """Bracketed estimate of lim_k d(e, k g) / k from finitely many powers.

    ``values[k-1] = f(k)``, the word length of k * g. Subadditivity gives
    lim = inf_k f(k)/k, so ``lower = min_k f(k)/k`` is the best averaged
    bound the samples support and ``estimate = upper = f(k_max)/k_max``.
    ``two_c_empirical = max_k (f(k) - k * estimate)`` plays the role of the
    additive constant in the linear-growth envelope f(k) <= c k + 2C; no
    convergence beyond the bracket is claimed.
    """

    element: tuple
    k_max: int
    values: tuple
    lower: float
    upper: float
    estimate: float
    two_c_empirical: float

    @property
    def bracket_width(self) -> float:
        return self.upper - self.lower


def stable_norm_estimate(
    generators, g, k_max: int, node_cap: int = 2_000_000
) -> StableNormEstimate:
    """Estimate the stable norm of g from word lengths of g, 2g, ..., k_max * g."""
    if k_max < 1:
        raise ParameterError("k_max must be positive")
    gens = _normalize_generators(generators)
    g = tuple(int(c) for c in g)
    if len(g) != len(gens[0]):
        raise MalformedInputError("element dimension does not match the generators")
    if all(c == 0 for c in g):
        raise ParameterError("stable norm of the identity is trivially 0")

    targets = {tuple(k * c for c in g): k for k in range(1, k_max + 1)}
    found: dict[int, int] = {}
    origin = (0,) * len(g)
    distances = {origin: 0}
    frontier = [origin]
    layer = 0
    while len(found) < k_max:
        layer += 1
        nxt = []
        for h in frontier:
            for step in gens:
                w = tuple(a + b for a, b in zip(h, step))
                if w not in distances:
                    distances[w] = layer
                    nxt.append(w)
                    k = targets.get(w)
                    if k is not None:
                        found[k] = layer
        if len(distances) > node_cap:
            raise ParameterError(
                f"BFS budget exceeded ({node_cap} nodes) before reaching {k_max} * g"
            )
        if not nxt:
            raise MalformedInputError("search exhausted the component without reaching k * g")
        frontier = nxt

    values = tuple(found[k] for k in range(1, k_max + 1))
    ratios = [v / k for k, v in enumerate(values, start=1)]
    estimate = ratios[-1]
    return StableNormEstimate(
        element=g,
        k_max=k_max,
        values=values,
        lower=min(ratios),
        upper=estimate,
        estimate=estimate,
        two_c_empirical=max(v - k * estimate for k, v in enumerate(values, start=1)),
    )


# ---------------------------------------------------------------------------
# Random normed samples


def normed_space_from_points(coords, norm="l2", tolerance: float = 1e-9) -> FiniteMetricSpace:
    """Finite metric space of explicit points under a tagged norm."""
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    diffs = pts[:, None, :] - pts[None, :, :]
    d = norm_distances(diffs, norm)
    return FiniteMetricSpace(tuple(f"p{i}" for i in range(len(pts))), d, tolerance)


def normed_sample(
    dimension: int, norm, count: int, seed: int, tolerance: float = 1e-9
) -> FiniteMetricSpace:
    """Reproducible uniform samples of the unit cube under the tagged norm's metric."""
    if count < 1:
        raise ParameterError("need at least one point")
    if dimension < 1:
        raise ParameterError("dimension must be positive")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 1.0, size=(count, dimension))
    return normed_space_from_points(pts, norm, tolerance)
