"""Exact and greedy search kernels for conflict-constrained subset problems.

All searches run on indices 0..n-1 with conflicts encoded as bitmasks:
``adj[v]`` is the mask of points that can never share a subset with v, and
``pair[(a, b)]`` (a < b) is the mask of points w for which {a, b, w} is a
forbidden triple. A subset is feasible when it contains no conflicting pair
and no forbidden triple; this covers maximum cliques, maximum independent
sets, and maximum independent sets in 3-uniform hypergraphs with one engine.

The exact search is deterministic and schedule-independent: a first pass
proves the optimal size by branch and bound (branching on the point hit by
the most conflicts, with the greedy subset as incumbent), then a second
lexicographic pass returns the first subset of that size, which is the
lexicographically smallest maximum.
"""

from __future__ import annotations

__all__ = ["greedy_conflict_free", "max_conflict_free"]


def _normalize(n, adj, pair):
    adj = list(adj) if adj is not None else [0] * n
    if len(adj) != n:
        raise ValueError("adj must have one mask per point")
    # register every triple under all three of its pair keys, so incremental
    # candidate filtering sees it no matter the inclusion order
    full: dict[tuple[int, int], int] = {}
    if pair:
        for (a, b), mask in pair.items():
            m = mask
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                for x, y, z in ((a, b, w), (a, w, b), (b, w, a)):
                    key = (x, y) if x < y else (y, x)
                    full[key] = full.get(key, 0) | (1 << z)
    return adj, full


def _triple_forbids(v, chosen, pair):
    """Mask of points that would complete a forbidden triple with v and a chosen point."""
    add = 0
    for a in chosen:
        m = pair.get((a, v) if a < v else (v, a))
        if m:
            add |= m
    return add


def greedy_conflict_free(n: int, adj=None, pair=None) -> list[int]:
    """Maximal feasible subset by lowest-index-first insertion with recheck."""
    adj, pair = _normalize(n, adj, pair)
    chosen: list[int] = []
    blocked = 0
    for v in range(n):
        if blocked >> v & 1:
            continue
        blocked |= adj[v] | _triple_forbids(v, chosen, pair)
        chosen.append(v)
    return chosen


def max_conflict_free(n: int, adj=None, pair=None) -> list[int]:
    """Lexicographically smallest maximum feasible subset (exact)."""
    adj, pair = _normalize(n, adj, pair)
    if n == 0:
        return []
    best = len(greedy_conflict_free(n, adj, pair))

    # Static conflict degree per point: appearances in pair conflicts plus
    # adjacency degree. Used only to pick branching points in phase 1.
    degree = [m.bit_count() for m in adj]
    for (a, b), mask in pair.items():
        cnt = mask.bit_count()
        degree[a] += cnt
        degree[b] += cnt
        m = mask
        while m:
            w = (m & -m).bit_length() - 1
            degree[w] += 1
            m &= m - 1

    chosen: list[int] = []

    def prove(cand: int) -> None:
        nonlocal best
        size = len(chosen)
        if size > best:
            best = size
        if size + cand.bit_count() <= best:
            return
        # branch point: highest conflict degree among candidates, lowest index ties
        v, vdeg = -1, -1
        m = cand
        while m:
            w = (m & -m).bit_length() - 1
            if degree[w] > vdeg:
                v, vdeg = w, degree[w]
            m &= m - 1
        sub = cand & ~(1 << v) & ~adj[v] & ~_triple_forbids(v, chosen, pair)
        chosen.append(v)
        prove(sub)
        chosen.pop()
        prove(cand & ~(1 << v))

    prove((1 << n) - 1)
    target = best
    if target == 0:
        return []

    found: list[int] | None = None

    def lex_first(cand: int) -> bool:
        nonlocal found
        if len(chosen) == target:
            found = list(chosen)
            return True
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            if len(chosen) + 1 + cand.bit_count() < target:
                return False
            sub = cand & ~adj[v] & ~_triple_forbids(v, chosen, pair)
            chosen.append(v)
            if lex_first(sub):
                return True
            chosen.pop()
        return False

    lex_first((1 << n) - 1)
    assert found is not None, "phase 2 must find a subset of the proven size"
    return found
