"""Small-rough-angle (SRA) checking, searching, and Ramsey-sized bounds.

A point set satisfies the SRA(alpha) condition, for alpha in (0, 1), when
every triple x, z, y obeys

    d(x, y) <= max(d(x, z) + alpha * d(z, y), alpha * d(x, z) + d(z, y)),

equivalently every comparison angle stays below pi - arccos(alpha). This
module verifies the condition on triples and subsets, searches for maximum
SRA subsets, and computes the Ramsey-recursion bound N(L) beyond which an
angular-totally-bounded point admits no SRA subset, plus the companion
doubling threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import search
from .core import FiniteMetricSpace
from .errors import DegenerateTripleError, MalformedInputError, ParameterError, SearchCapError

__all__ = [
    "AngleBoundReport",
    "DoublingThreshold",
    "RamseyCertificate",
    "SraParameter",
    "SraReport",
    "SraSubsetResult",
    "SraViolation",
    "check_triple_sra",
    "compute_sra_free_bound",
    "doubling_threshold",
    "max_sra_subset",
    "ramsey_upper_bound",
    "sra_angle_bound",
    "verify_sra_set",
]


def _alpha_value(alpha) -> float:
    a = alpha.alpha if isinstance(alpha, SraParameter) else float(alpha)
    if not 0.0 < a < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {a}")
    return a


@dataclass(frozen=True)
class SraParameter:
    """The roughness level alpha in (0, 1); the angle bound is derived, never stored."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def angle_bound(self) -> float:
        """pi - arccos(alpha): the largest comparison angle an SRA(alpha) set allows."""
        return math.pi - math.acos(self.alpha)


@dataclass(frozen=True)
class SraViolation:
    """A failing triple: d(x, y) exceeds both SRA bounds at middle vertex z."""

    x: int
    z: int
    y: int
    lhs: float
    rhs: float


@dataclass(frozen=True)
class SraReport:
    """Verdict for a subset at level alpha, with the first violating triple on failure."""

    passed: bool
    alpha: float
    witness: SraViolation | None
    checked_triples: int

    def __bool__(self) -> bool:
        return self.passed


def check_triple_sra(space: FiniteMetricSpace, x, z, y, alpha) -> SraViolation | None:
    """Check one triple with ``z`` as the middle vertex; None means pass.

    Passes when ``d(x, y) <= max(d(x,z) + alpha*d(z,y), alpha*d(x,z) + d(z,y))``
    up to the space tolerance. Repeated points are rejected rather than
    treated as vacuous.
    """
    a = _alpha_value(alpha)
    xi, zi, yi = space.index(x), space.index(z), space.index(y)
    if len({xi, zi, yi}) < 3:
        raise DegenerateTripleError("SRA triple needs three distinct points")
    d = space.dist
    lhs = d[xi, yi]
    rhs = max(d[xi, zi] + a * d[zi, yi], a * d[xi, zi] + d[zi, yi])
    if lhs <= rhs + space.tolerance:
        return None
    return SraViolation(x=xi, z=zi, y=yi, lhs=float(lhs), rhs=float(rhs))


def _triple_index(k: int) -> np.ndarray:
    """All i < j < l index triples of range(k), lexicographic, shape (m, 3)."""
    if k < 3:
        return np.empty((0, 3), dtype=np.intp)
    return np.array(list(combinations(range(k), 3)), dtype=np.intp)


def _middle_ok(D: np.ndarray, a: float, tol: float, x, z, y) -> np.ndarray:
    dxz = D[x, z]
    dzy = D[z, y]
    return D[x, y] <= np.maximum(dxz + a * dzy, a * dxz + dzy) + tol


def verify_sra_set(space: FiniteMetricSpace, subset, alpha) -> SraReport:
    """Verify SRA(alpha) over every triple of ``subset`` with every middle vertex.

    Each unordered triple is tested with all three choices of middle vertex
    (the condition is symmetric in the outer pair). Subsets with fewer than
    three points pass vacuously. On failure the witness is the first
    violating triple in lexicographic index order, with middles tried in
    index order inside the triple, and ``checked_triples`` counts the
    triples examined up to and including it.
    """
    a = _alpha_value(alpha)
    ids = space.indices(subset)
    if len(set(ids)) != len(ids):
        raise MalformedInputError("subset contains repeated points")
    k = len(ids)
    if k < 3:
        return SraReport(passed=True, alpha=a, witness=None, checked_triples=0)
    tri = _triple_index(k)
    i, j, l = tri[:, 0], tri[:, 1], tri[:, 2]
    D = space.dist[np.ix_(ids, ids)]
    tol = space.tolerance
    ok_i = _middle_ok(D, a, tol, j, i, l)  # middle = first point of the triple
    ok_j = _middle_ok(D, a, tol, i, j, l)
    ok_l = _middle_ok(D, a, tol, i, l, j)
    bad = ~(ok_i & ok_j & ok_l)
    if not bad.any():
        return SraReport(passed=True, alpha=a, witness=None, checked_triples=len(tri))
    m0 = int(np.argmax(bad))
    ti, tj, tl = (int(v) for v in tri[m0])
    if not ok_i[m0]:
        x, z, y = tj, ti, tl
    elif not ok_j[m0]:
        x, z, y = ti, tj, tl
    else:
        x, z, y = ti, tl, tj
    lhs = float(D[x, y])
    rhs = float(max(D[x, z] + a * D[z, y], a * D[x, z] + D[z, y]))
    witness = SraViolation(x=ids[x], z=ids[z], y=ids[y], lhs=lhs, rhs=rhs)
    return SraReport(passed=False, alpha=a, witness=witness, checked_triples=m0 + 1)


def violating_triples(space: FiniteMetricSpace, alpha, subset=None) -> np.ndarray:
    """Index triples (into ``subset`` order) failing SRA(alpha) for some middle choice."""
    a = _alpha_value(alpha)
    ids = space.indices(subset) if subset is not None else list(range(space.n))
    tri = _triple_index(len(ids))
    if not len(tri):
        return tri
    D = space.dist[np.ix_(ids, ids)]
    tol = space.tolerance
    i, j, l = tri[:, 0], tri[:, 1], tri[:, 2]
    good = (
        _middle_ok(D, a, tol, j, i, l)
        & _middle_ok(D, a, tol, i, j, l)
        & _middle_ok(D, a, tol, i, l, j)
    )
    return tri[~good]


@dataclass(frozen=True)
class SraSubsetResult:
    """A feasible SRA subset; ``optimal`` means proven maximum cardinality."""

    points: tuple
    alpha: float
    optimal: bool


def max_sra_subset(
    space: FiniteMetricSpace, alpha, mode: str = "exact", exact_cap: int = 40
) -> SraSubsetResult:
    """Largest subset of the space whose every triple passes SRA(alpha).

    The violating triples form a 3-uniform hypergraph, materialized once;
    exact mode finds a maximum independent set by branch and bound (greedy
    incumbent, then a lexicographic pass, so the result is the
    lexicographically smallest maximum). Greedy mode inserts points in
    index order with a feasibility recheck. Exact mode refuses instances
    above ``exact_cap`` points.
    """
    a = _alpha_value(alpha)
    if mode not in ("exact", "greedy"):
        raise ParameterError(f"mode must be 'exact' or 'greedy', got {mode!r}")
    n = space.n
    if mode == "exact" and n > exact_cap:
        raise SearchCapError(
            f"exact SRA search capped at {exact_cap} points (space has {n}); use greedy mode"
        )
    pair: dict[tuple[int, int], int] = {}
    for ti, tj, tl in violating_triples(space, a):
        ti, tj, tl = int(ti), int(tj), int(tl)
        pair[ti, tj] = pair.get((ti, tj), 0) | (1 << tl)
    if mode == "exact":
        chosen = search.max_conflict_free(n, pair=pair)
        return SraSubsetResult(points=tuple(chosen), alpha=a, optimal=True)
    chosen = search.greedy_conflict_free(n, pair=pair)
    return SraSubsetResult(points=tuple(chosen), alpha=a, optimal=len(chosen) == n)


@dataclass(frozen=True)
class AngleBoundReport:
    """Largest comparison angle over a subset versus the SRA angle bound."""

    max_angle: float
    bound: float
    margin: float
    passed: bool
    witness: tuple | None  # (x, z, y) attaining the maximum angle at z

    def __bool__(self) -> bool:
        return self.passed


def sra_angle_bound(space: FiniteMetricSpace, subset, alpha) -> AngleBoundReport:
    """Max comparison angle over all triples of the subset vs pi - arccos(alpha).

    An SRA(alpha) subset always passes: the defining inequality forces
    every comparison angle at a middle vertex to at most pi - arccos(alpha).
    Subsets with fewer than three points pass vacuously with max angle 0.
    """
    a = _alpha_value(alpha)
    bound = math.pi - math.acos(a)
    ids = space.indices(subset)
    tri = _triple_index(len(ids))
    if not len(tri):
        return AngleBoundReport(0.0, bound, bound, True, None)
    D = space.dist[np.ix_(ids, ids)]
    i, j, l = tri[:, 0], tri[:, 1], tri[:, 2]

    def angles(x, z, y):
        dxz, dzy, dxy = D[x, z], D[z, y], D[x, y]
        cos = (dxz**2 + dzy**2 - dxy**2) / (2.0 * dxz * dzy)
        return np.arccos(np.clip(cos, -1.0, 1.0))

    per_middle = np.stack([angles(j, i, l), angles(i, j, l), angles(i, l, j)])
    flat = int(np.argmax(per_middle))
    which, m0 = divmod(flat, len(tri))
    ti, tj, tl = (int(v) for v in tri[m0])
    witness = ((tj, ti, tl), (ti, tj, tl), (ti, tl, tj))[which]
    witness = tuple(ids[w] for w in witness)
    max_angle = float(per_middle.flat[flat])
    return AngleBoundReport(
        max_angle=max_angle,
        bound=bound,
        margin=bound - max_angle,
        passed=max_angle <= bound + space.tolerance,
        witness=witness,
    )


# Known two-color Ramsey numbers R(a, b) for a, b >= 3; symmetric lookup.
_EXACT_RAMSEY = {
    (3, 3): 6,
    (3, 4): 9,
    (3, 5): 14,
    (3, 6): 18,
    (3, 7): 23,
    (3, 8): 28,
    (3, 9): 36,
    (4, 4): 18,
    (4, 5): 25,
}


@dataclass(frozen=True)
class RamseyNumber:
    value: int
    exact: bool


def ramsey_upper_bound(a: int, b: int) -> RamseyNumber:
    """R(a, b) from the exact table when known, else the binomial bound C(a+b-2, a-1).

    R(2, b) = b is exact by pigeonhole. Values outside the table are upper
    bounds and flagged as such; the true numbers are open problems.
    """
    if a < 2 or b < 2:
        raise ParameterError("Ramsey arguments must be at least 2")
    if a == 2:
        return RamseyNumber(b, True)
    if b == 2:
        return RamseyNumber(a, True)
    key = (a, b) if a <= b else (b, a)
    if key in _EXACT_RAMSEY:
        return RamseyNumber(_EXACT_RAMSEY[key], True)
    return RamseyNumber(math.comb(a + b - 2, a - 1), False)


@dataclass(frozen=True)
class RamseyCertificate:
    """The chain H_L, ..., H_2 and the bound N = H_2 + 1.

    Each chain entry is (index i, H_i, exact); an entry is exact only when
    its Ramsey value came from the table and every deeper entry was exact,
    so N is an upper-bound certificate whenever any entry is a bound.
    """

    l: int
    chain: tuple
    n: int

    @property
    def exact(self) -> bool:
        return all(entry[2] for entry in self.chain)


def compute_sra_free_bound(l: int) -> RamseyCertificate:
    """Point-count bound N(L) above which no SRA subset survives angular total boundedness.

    Recursion: H_L = R(2, L), then H_{i-1} = R(H_i + 1, L) down to H_2,
    and N = H_2 + 1. Values grow extremely fast; arbitrary-precision
    integers keep the chain computable.
    """
    if l < 2:
        raise ParameterError("L must be at least 2")
    value = ramsey_upper_bound(2, l)
    h, exact = value.value, value.exact
    chain = [(l, h, exact)]
    for i in range(l - 1, 1, -1):
        step = ramsey_upper_bound(h + 1, l)
        exact = exact and step.exact
        h = step.value
        chain.append((i, h, exact))
    return RamseyCertificate(l=l, chain=tuple(chain), n=h + 1)


@dataclass(frozen=True)
class DoublingThreshold:
    """Smallest chain length n_tilde with alpha * (n_tilde - 2) >= 3."""

    alpha: float
    n_tilde: int

    def __post_init__(self):
        if not (
            self.alpha * (self.n_tilde - 2) >= 3 and self.alpha * (self.n_tilde - 3) < 3
        ):
            raise ParameterError("n_tilde does not match its defining inequalities")


def doubling_threshold(alpha: float) -> DoublingThreshold:
    """ceil(3/alpha) + 2, adjusted so the defining inequalities hold exactly in floats."""
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    k = max(1, math.ceil(3.0 / alpha))
    while k > 1 and alpha * (k - 1) >= 3:
        k -= 1
    while alpha * k < 3:
        k += 1
    return DoublingThreshold(alpha=alpha, n_tilde=k + 2)
