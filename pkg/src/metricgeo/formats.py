"""On-disk formats: space JSON/CSV, graph JSON, curve JSON.

Distance entries are written as decimal literals with 17 significant
digits, which round-trip bit-exactly through any conforming JSON parser.
Space documents may carry a free-form ``metadata`` block; generators use
it for construction parameters and designated point lists (for example
``{"designated": {"tips": [...]}}``), which the CLI accepts as subset names.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .core import FiniteMetricSpace
from .curves import DiscreteCurve
from .errors import MalformedInputError
from .graphs import WeightedGraph

__all__ = [
    "curve_from_json",
    "curve_to_json",
    "graph_from_json",
    "graph_to_json",
    "load_curve",
    "load_graph",
    "load_space",
    "space_from_csv",
    "space_from_json",
    "space_to_csv",
    "space_to_json",
]


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def space_to_json(space: FiniteMetricSpace, metadata: dict | None = None) -> str:
    rows = ",\n    ".join(
        "[" + ", ".join(_f17(v) for v in row) + "]" for row in space.dist
    )
    parts = [
        "{\n",
        '  "labels": ' + json.dumps(list(space.labels)) + ",\n",
        '  "dist": [\n    ' + rows + "\n  ],\n",
        '  "tolerance": ' + _f17(space.tolerance),
    ]
    if metadata is not None:
        parts.append(',\n  "metadata": ' + json.dumps(metadata, sort_keys=True))
    parts.append("\n}\n")
    return "".join(parts)


def space_from_json(text: str, tolerance: float | None = None):
    """Parse a space document; returns (space, metadata)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "dist" not in doc:
        raise MalformedInputError("space document needs a 'dist' matrix")
    dist = np.asarray(doc["dist"], dtype=float)
    labels = doc.get("labels")
    if labels is None:
        labels = [f"p{i}" for i in range(dist.shape[0] if dist.ndim == 2 else 0)]
    tol = tolerance if tolerance is not None else float(doc.get("tolerance", 1e-9))
    space = FiniteMetricSpace(tuple(labels), dist, tol)
    return space, doc.get("metadata", {})


def space_to_csv(space: FiniteMetricSpace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(space.labels)
    for row in space.dist:
        writer.writerow([_f17(v) for v in row])
    return buf.getvalue()


def space_from_csv(text: str, tolerance: float = 1e-9):
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise MalformedInputError("empty CSV document")
    labels = tuple(rows[0])
    try:
        dist = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise MalformedInputError(f"non-numeric CSV entry: {exc}") from None
    return FiniteMetricSpace(labels, dist, tolerance), {}


def graph_to_json(graph: WeightedGraph, metadata: dict | None = None) -> str:
    labels = graph.labels or tuple(f"v{i}" for i in range(graph.n_vertices))
    doc = {
        "vertices": list(labels),
        "edges": [[u, v, json.loads(_f17(w))] for u, v, w in graph.edges],
    }
    if metadata is not None:
        doc["metadata"] = metadata
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def graph_from_json(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise MalformedInputError("graph document needs 'vertices' and 'edges'")
    labels = tuple(doc["vertices"])
    edges = tuple((int(u), int(v), float(w)) for u, v, w in doc["edges"])
    graph = WeightedGraph(n_vertices=len(labels), edges=edges, labels=labels)
    return graph, doc.get("metadata", {})


def curve_to_json(curve: DiscreteCurve, metadata: dict | None = None) -> str:
    if curve.space is not None:
        doc: dict = {
            "space": json.loads(space_to_json(curve.space)),
            "order": list(curve.order),
        }
    else:
        doc = {
            "coords": [[json.loads(_f17(v)) for v in row] for row in curve.coords],
            "norm": curve.norm,
        }
        if curve.snowflake_alpha != 1.0:
            doc["snowflake_alpha"] = curve.snowflake_alpha
        if curve.scale != 1.0:
            doc["scale"] = curve.scale
    doc["tolerance"] = curve.tolerance
    if metadata is not None:
        doc["metadata"] = metadata
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def curve_from_json(text: str, base_dir: Path | None = None):
    """Parse a curve document; a 'space' entry may be inline or a file path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedInputError("curve document must be an object")
    tol = float(doc.get("tolerance", 1e-9))
    if "coords" in doc:
        curve = DiscreteCurve(
            coords=np.asarray(doc["coords"], dtype=float),
            norm=doc.get("norm", "l2"),
            snowflake_alpha=float(doc.get("snowflake_alpha", 1.0)),
            scale=float(doc.get("scale", 1.0)),
            tolerance=tol,
        )
        return curve, doc.get("metadata", {})
    if "space" not in doc or "order" not in doc:
        raise MalformedInputError("curve document needs coords or (space, order)")
    ref = doc["space"]
    if isinstance(ref, str):
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        space, _ = load_space(path)
    else:
        space, _ = space_from_json(json.dumps(ref))
    curve = DiscreteCurve(space=space, order=tuple(doc["order"]), tolerance=tol)
    return curve, doc.get("metadata", {})


def _read(path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def load_space(path, tolerance: float | None = None):
    """Load a space from JSON or CSV ('-' reads standard input)."""
    text = _read(path)
    if str(path).endswith(".csv"):
        return space_from_csv(text, tolerance if tolerance is not None else 1e-9)
    return space_from_json(text, tolerance)


def load_graph(path):
    return graph_from_json(_read(path))


def load_curve(path):
    base = None if str(path) == "-" else Path(path).parent
    return curve_from_json(_read(path), base_dir=base)
