"""Weighted graphs as metric substrates, with a deterministic geodesic choice.

Graph-backed spaces carry their metric through shortest paths. For the
geodesic-based checks a quasi-bicombing is needed: one chosen shortest
vertex path per ordered pair. We pick the lexicographically smallest
shortest vertex path under the vertex ordering, which is deterministic and
independent of any search schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .core import FiniteMetricSpace
from .errors import MalformedInputError, ParameterError

__all__ = ["GeodesicSet", "WeightedGraph", "path_graph", "star_graph"]


@dataclass
class WeightedGraph:
    """Undirected graph with positive edge lengths inducing a path metric."""

    n_vertices: int
    edges: tuple
    labels: tuple | None = None
    tolerance: float = 1e-9
    _dist: np.ndarray | None = field(default=None, repr=False, compare=False)
    _adj: list | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise MalformedInputError("graph needs at least one vertex")
        seen = {}
        for u, v, length in self.edges:
            u, v, length = int(u), int(v), float(length)
            if not 0 <= u < self.n_vertices or not 0 <= v < self.n_vertices:
                raise MalformedInputError(f"edge ({u}, {v}) out of vertex range")
            if u == v:
                raise MalformedInputError(f"self loop at vertex {u}")
            if not length > 0 or not np.isfinite(length):
                raise MalformedInputError(f"edge ({u}, {v}) has non-positive length {length}")
            key = (u, v) if u < v else (v, u)
            seen[key] = min(seen.get(key, np.inf), length)
        self.edges = tuple((u, v, seen[u, v]) for u, v in sorted(seen))
        if self.labels is not None:
            if len(self.labels) != self.n_vertices:
                raise MalformedInputError("label count does not match vertex count")
            self.labels = tuple(self.labels)

    def adjacency(self) -> list:
        """Per-vertex neighbor list as (neighbor, length), sorted by neighbor index."""
        if self._adj is None:
            adj: list[list] = [[] for _ in range(self.n_vertices)]
            for u, v, length in self.edges:
                adj[u].append((v, length))
                adj[v].append((u, length))
            self._adj = [sorted(nbrs) for nbrs in adj]
        return self._adj

    def csr(self):
        u = np.array([e[0] for e in self.edges], dtype=np.intp)
        v = np.array([e[1] for e in self.edges], dtype=np.intp)
        w = np.array([e[2] for e in self.edges], dtype=float)
        n = self.n_vertices
        return coo_matrix((w, (u, v)), shape=(n, n)).tocsr()

    def distances_from(self, sources) -> np.ndarray:
        """Shortest-path distances from the given source vertices (rows)."""
        return dijkstra(self.csr(), directed=False, indices=list(sources))

    def distance_matrix(self) -> np.ndarray:
        """All-pairs shortest paths by single-source search from each vertex, cached."""
        if self._dist is None:
            self._dist = dijkstra(self.csr(), directed=False)
        return self._dist

    def to_metric_space(self) -> FiniteMetricSpace:
        d = self.distance_matrix()
        if not np.all(np.isfinite(d)):
            raise MalformedInputError("graph is disconnected; no finite metric")
        labels = self.labels or tuple(f"v{i}" for i in range(self.n_vertices))
        return FiniteMetricSpace(labels, d, self.tolerance)


class GeodesicSet:
    """One chosen shortest vertex path per ordered vertex pair (a quasi-bicombing).

    The choice rule is fixed: the lexicographically smallest shortest
    vertex path. Paths are built on demand and cached; every stored path's
    length equals the endpoint distance by construction of the walk.
    """

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self._cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def path(self, u: int, v: int) -> tuple[int, ...]:
        key = (int(u), int(v))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        u, v = key
        n = self.graph.n_vertices
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedInputError(f"vertex pair ({u}, {v}) out of range")
        D = self.graph.distance_matrix()
        if not np.isfinite(D[u, v]):
            raise MalformedInputError(f"missing geodesic: vertices {u} and {v} are disconnected")
        tol = self.graph.tolerance
        adj = self.graph.adjacency()
        path = [u]
        cur = u
        while cur != v:
            for nbr, length in adj[cur]:  # ascending neighbor index: lex-smallest pick
                if length + D[nbr, v] <= D[cur, v] + tol:
                    path.append(nbr)
                    cur = nbr
                    break
            else:
                raise MalformedInputError(
                    f"geodesic walk stalled at vertex {cur}; inconsistent distances"
                )
        out = tuple(path)
        self._cache[key] = out
        return out

    def cumulative(self, path) -> np.ndarray:
        """Cumulative arc length along a vertex path, starting at 0."""
        adj = self.graph.adjacency()
        arcs = [0.0]
        for a, b in zip(path, path[1:]):
            for nbr, length in adj[a]:
                if nbr == b:
                    arcs.append(arcs[-1] + length)
                    break
            else:
                raise MalformedInputError(f"({a}, {b}) is not an edge")
        return np.array(arcs)


def path_graph(lengths) -> WeightedGraph:
    """Chain of vertices 0 - 1 - ... with the given consecutive edge lengths."""
    lengths = list(lengths)
    if not lengths:
        raise ParameterError("path graph needs at least one edge")
    return WeightedGraph(
        n_vertices=len(lengths) + 1,
        edges=tuple((i, i + 1, float(s)) for i, s in enumerate(lengths)),
    )


def star_graph(spokes: int, length: float = 1.0) -> WeightedGraph:
    """Hub vertex 0 with ``spokes`` legs of equal length (a tripod when spokes=3)."""
    if spokes < 1:
        raise ParameterError("star graph needs at least one spoke")
    return WeightedGraph(
        n_vertices=spokes + 1,
        edges=tuple((0, i + 1, float(length)) for i in range(spokes)),
    )
