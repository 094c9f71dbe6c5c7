"""Versioned JSON documents for paths, complexes, and cube families."""

from __future__ import annotations

import json

import numpy as np

from .curve_model import CurveComplex, Edge, SampledPath
from .errors import FormatError
from .planar_geometry import CubeFamily

FORMAT = "moment-atlas/1"


def _require(cond, msg):
    if not cond:
        raise FormatError(msg)


def _check_header(doc, kind):
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require(doc.get("format") == FORMAT, "unsupported format tag %r" % doc.get("format"))
    _require(doc.get("kind") == kind, "expected a %r document" % kind)


def path_to_doc(path: SampledPath) -> dict:
    return {
        "format": FORMAT,
        "kind": "path",
        "dim": path.dim,
        "closed": bool(path.closed),
        "samples": [
            [float(t)] + [float(c) for c in p]
            for t, p in zip(path.times, path.points)
        ],
    }


def path_from_doc(doc: dict) -> SampledPath:
    _check_header(doc, "path")
    dim = doc.get("dim")
    samples = doc.get("samples")
    _require(isinstance(dim, int) and dim >= 1, "dim must be a positive integer")
    _require(isinstance(samples, list) and len(samples) >= 2, "need >= 2 samples")
    rows = []
    for row in samples:
        _require(
            isinstance(row, list) and len(row) == dim + 1,
            "each sample is [t, x1..xn]",
        )
        rows.append([float(v) for v in row])
    arr = np.asarray(rows)
    try:
        return SampledPath(
            times=arr[:, 0], points=arr[:, 1:], closed=bool(doc.get("closed", False))
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def complex_to_doc(complex: CurveComplex) -> dict:
    return {
        "format": FORMAT,
        "kind": "complex",
        "dim": complex.dim,
        "vertices": [[float(c) for c in v] for v in complex.vertices],
        "edges": [
            {
                "v_from": e.v_from,
                "v_to": e.v_to,
                "geometry": [[float(c) for c in p] for p in e.geometry],
            }
            for e in complex.edges
        ],
    }


def complex_from_doc(doc: dict) -> CurveComplex:
    _check_header(doc, "complex")
    vertices = doc.get("vertices")
    edges = doc.get("edges")
    _require(isinstance(vertices, list) and vertices, "vertices must be a list")
    _require(isinstance(edges, list), "edges must be a list")
    V = np.asarray(vertices, dtype=float)
    _require(V.ndim == 2, "vertices must be points")
    out_edges = []
    for e in edges:
        _require(isinstance(e, dict), "each edge is an object")
        vf, vt = e.get("v_from"), e.get("v_to")
        _require(
            isinstance(vf, int) and isinstance(vt, int), "edge endpoints are indices"
        )
        _require(0 <= vf < len(vertices) and 0 <= vt < len(vertices), "bad edge index")
        geom = np.asarray(e.get("geometry"), dtype=float)
        _require(geom.ndim == 2 and geom.shape[0] >= 2, "edge geometry is a polyline")
        try:
            out_edges.append(Edge(v_from=vf, v_to=vt, geometry=geom))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    try:
        complex = CurveComplex(vertices=V, edges=tuple(out_edges))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if not complex.is_connected():
        raise FormatError("complex document is not connected")
    return complex


def cubes_to_doc(family: CubeFamily) -> dict:
    return {
        "format": FORMAT,
        "kind": "cubes",
        "dim": int(family.centers.shape[1]),
        "cubes": [
            {
                "center": [float(c) for c in family.centers[i]],
                "radius": float(family.radii[i]),
                "axis": int(family.axes[i]) + 1,
                "l": float(family.l[i]),
                "L": float(family.big_l[i]),
            }
            for i in range(family.size)
        ],
    }


def cubes_from_doc(doc: dict) -> CubeFamily:
    _check_header(doc, "cubes")
    cubes = doc.get("cubes")
    _require(isinstance(cubes, list) and cubes, "cubes must be a non-empty list")
    centers, radii, axes, ls, Ls = [], [], [], [], []
    for c in cubes:
        _require(isinstance(c, dict), "each cube is an object")
        centers.append([float(x) for x in c["center"]])
        radii.append(float(c["radius"]))
        axis = int(c["axis"])
        _require(axis >= 1, "axis indices are 1-based")
        axes.append(axis - 1)
        ls.append(float(c["l"]))
        Ls.append(float(c["L"]))
    return CubeFamily(
        centers=np.asarray(centers),
        radii=np.asarray(radii),
        axes=np.asarray(axes),
        l=np.asarray(ls),
        big_l=np.asarray(Ls),
    )


def load(path_or_str, kind=None):
    """Load a document from a file path; dispatch on its ``kind`` field."""
    with open(path_or_str, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError("invalid JSON: %s" % exc) from exc
    actual = doc.get("kind") if isinstance(doc, dict) else None
    if kind is not None and actual != kind:
        raise FormatError("expected a %r document, got %r" % (kind, actual))
    loaders = {"path": path_from_doc, "complex": complex_from_doc, "cubes": cubes_from_doc}
    if actual not in loaders:
        raise FormatError("unknown document kind %r" % actual)
    return loaders[actual](doc)


def dump(doc: dict, fh_or_path):
    if hasattr(fh_or_path, "write"):
        json.dump(doc, fh_or_path, indent=2)
        fh_or_path.write("\n")
    else:
        with open(fh_or_path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
