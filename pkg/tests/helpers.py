"""Independent brute-force oracles used to gate the fast implementations.

Everything here enumerates or triple-loops directly over definitions and
never calls the code paths it checks.
"""

import math
from itertools import combinations

import numpy as np

from metricgeo import GeodesicSet, compute_beta, max_angle_separated


def popcounts(masks: np.ndarray) -> np.ndarray:
    counts = np.zeros_like(masks)
    m = masks.copy()
    while m.any():
        counts += m & 1
        m >>= 1
    return counts


def brute_max_conflict_free(n, adj=None, pair=None):
    """(max size, lexicographically smallest maximum subset) by full enumeration."""
    adj = adj or [0] * n
    pair = pair or {}
    best_size, best = 0, []
    for mask in range(1 << n):
        members = [v for v in range(n) if mask >> v & 1]
        ok = all(not (adj[a] >> b & 1) for a, b in combinations(members, 2))
        if ok:
            for (a, b), third in pair.items():
                if mask >> a & 1 and mask >> b & 1 and mask & third:
                    ok = False
                    break
        if ok and (len(members) > best_size or (len(members) == best_size and members < best)):
            best_size, best = len(members), members
    return best_size, best


def sra_triple_ok(d, x, z, y, alpha, tol):
    return d[x][y] <= max(d[x][z] + alpha * d[z][y], alpha * d[x][z] + d[z][y]) + tol


def subset_is_sra(d, members, alpha, tol):
    for x, z, y in combinations(members, 3):
        for mid, left, right in ((z, x, y), (x, z, y), (y, x, z)):
            if not sra_triple_ok(d, left, mid, right, alpha, tol):
                return False
    return True


def brute_max_sra_size(space, alpha):
    """Maximum SRA subset cardinality by vectorized subset enumeration."""
    n = space.n
    d = space.dist
    tol = space.tolerance
    bad_masks = []
    for x, z, y in combinations(range(n), 3):
        if not subset_is_sra(d, (x, z, y), alpha, tol):
            bad_masks.append((1 << x) | (1 << z) | (1 << y))
    subsets = np.arange(1 << n, dtype=np.int64)
    feasible = np.ones(1 << n, dtype=bool)
    for m in bad_masks:
        feasible &= (subsets & m) != m
    return int(popcounts(subsets[feasible]).max())


def brute_self_contracted(curve):
    """Direct cubic check of the defining triple inequality (vectorized grid)."""
    n = len(curve)
    d = curve.distance_submatrix(range(n))
    tol = curve.tolerance
    i1, i2, i3 = np.ogrid[:n, :n, :n]
    ordered = (i1 <= i2) & (i2 <= i3)
    violated = d[i2, i3] > d[i1, i3] + tol
    return not bool((ordered & violated).any())


def brute_max_separated_size(space, r, within=None):
    idx = list(range(space.n)) if within is None else list(within)
    d = space.dist
    tol = space.tolerance
    bad = []
    for a, b in combinations(range(len(idx)), 2):
        if d[idx[a]][idx[b]] < r - tol:
            bad.append((1 << a) | (1 << b))
    subsets = np.arange(1 << len(idx), dtype=np.int64)
    feasible = np.ones(len(subsets), dtype=bool)
    for m in bad:
        feasible &= (subsets & m) != m
    return int(popcounts(subsets[feasible]).max())


def brute_max_angle_separated_size(space, p, epsilon, candidates):
    d = space.dist
    tol = space.tolerance
    pi_ = space.index(p)
    idx = [space.index(c) for c in candidates]

    def angle(a, b):
        la, lb, opp = d[pi_][a], d[pi_][b], d[a][b]
        cos = (la * la + lb * lb - opp * opp) / (2 * la * lb)
        return math.acos(min(1.0, max(-1.0, cos)))

    bad = []
    for a, b in combinations(range(len(idx)), 2):
        if angle(idx[a], idx[b]) < epsilon - tol:
            bad.append((1 << a) | (1 << b))
    subsets = np.arange(1 << len(idx), dtype=np.int64)
    feasible = np.ones(len(subsets), dtype=bool)
    for m in bad:
        feasible &= (subsets & m) != m
    return int(popcounts(subsets[feasible]).max())


def atb_transfer_exhaustive(graph, p, epsilon, pool):
    """Exhaustively verify the geodesic-to-angle transfer on one configuration.

    For every subset size L where all L-subsets of the pool pass the
    geodesic-proximity test, the maximum angle-separated cardinality at p
    must stay below L. Returns (max angle-separated size, max
    proximity-free subset size) for reporting.
    """
    space = graph.to_metric_space()
    geos = GeodesicSet(graph)
    beta = compute_beta(epsilon)
    d = space.dist
    tol = space.tolerance
    pool = list(pool)
    m = len(pool)
    paths = {y: geos.path(p, y) for y in pool}

    close = np.zeros((m, m), dtype=bool)  # ordered proximity relation
    for i, yi in enumerate(pool):
        for j, yj in enumerate(pool):
            if i == j:
                continue
            gap = min(d[yi][w] for w in paths[yj])
            close[i, j] = gap <= beta * d[p][yi] + tol

    has_pair = close | close.T
    pair_masks = [
        (1 << a) | (1 << b) for a, b in combinations(range(m), 2) if has_pair[a, b]
    ]
    subsets = np.arange(1 << m, dtype=np.int64)
    passes = np.zeros(len(subsets), dtype=bool)
    for mask in pair_masks:
        passes |= (subsets & mask) == mask
    sizes = popcounts(subsets)

    witness = max_angle_separated(space, p, epsilon, pool)
    separated = witness.cardinality
    max_free = int(sizes[~passes].max())
    for level in range(2, m + 1):
        level_sets = sizes == level
        if bool(passes[level_sets].all()):
            assert separated < level, (
                f"transfer failed: all {level}-subsets pass the geodesic test but "
                f"{separated} candidates are angle-separated at epsilon={epsilon}"
            )
    return separated, max_free


def random_spaces(count, n_max, seed, n_min=3):
    """Stream of (rng-sized) random shortest-path-repaired metric spaces."""
    from metricgeo import random_metric_space

    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        yield random_metric_space(n, rng)
