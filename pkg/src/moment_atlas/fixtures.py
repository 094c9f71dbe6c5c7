"""Deterministic fixture curves, paths, and cube families.

These are the standing test subjects: square grids in the plane, edge
skeletons of cube partitions in higher dimensions, a two-lobe bouquet with
rationally independent lobe areas, trees, polygonal circles, and the
closed coefficient path built as a composition (hence an exact universal
center).
"""

from __future__ import annotations

import math

import numpy as np

from .curve_model import CurveComplex, Edge, EdgeWord, SampledPath, realize
from .planar_geometry import CubeFamily


def grid_complex(k: int) -> CurveComplex:
    """Boundaries of the k x k congruent subsquares of [-1, 1]^2.

    Lattice points are vertices (degree 2 corners included), unit grid
    segments are edges: V = (k+1)^2, E = 2k(k+1).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    coords = np.linspace(-1.0, 1.0, k + 1)
    verts = [(coords[i], coords[j]) for i in range(k + 1) for j in range(k + 1)]
    verts.sort()
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i in range(k + 1):
        for j in range(k + 1):
            p = (coords[i], coords[j])
            if i < k:
                q = (coords[i + 1], coords[j])
                edges.append((index[p], index[q], np.array([p, q])))
            if j < k:
                q = (coords[i], coords[j + 1])
                edges.append((index[p], index[q], np.array([p, q])))
    edges.sort(key=lambda t: (t[0], t[1]))
    return CurveComplex(
        vertices=np.asarray(verts, dtype=float),
        edges=tuple(Edge(v_from=a, v_to=b, geometry=g) for a, b, g in edges),
    )


def grid_segment_paths(k: int):
    """The same grid as 2-sample open paths, one per unit segment."""
    complex = grid_complex(k)
    return [
        SampledPath(times=np.array([0.0, 1.0]), points=e.geometry, closed=False)
        for e in complex.edges
    ]


def cube_grid_complex(n: int, k: int) -> CurveComplex:
    """Union of the edges of the k^n congruent subcubes of [-1, 1]^n."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    coords = np.linspace(-1.0, 1.0, k + 1)
    points = [
        tuple(coords[i] for i in idx)
        for idx in np.ndindex(*([k + 1] * n))
    ]
    points.sort()
    index = {p: i for i, p in enumerate(points)}
    edges = []
    for p in points:
        idx = tuple(int(round((c + 1.0) * k / 2.0)) for c in p)
        for axis in range(n):
            if idx[axis] < k:
                q = list(p)
                q[axis] = coords[idx[axis] + 1]
                q = tuple(q)
                edges.append((index[p], index[q], np.array([p, q])))
    edges.sort(key=lambda t: (t[0], t[1]))
    return CurveComplex(
        vertices=np.asarray(points, dtype=float),
        edges=tuple(Edge(v_from=a, v_to=b, geometry=g) for a, b, g in edges),
    )


def cube_grid_family(complex: CurveComplex, k: int) -> CubeFamily:
    """The hand-built cube family for :func:`cube_grid_complex`.

    Midpoint centers, radius 1/(2k), the edge's own axis, the conservative
    projected measure 1/(4k), and the exact edge l1 length 2/k.
    """
    centers, axes = [], []
    for e in complex.edges:
        centers.append((e.geometry[0] + e.geometry[1]) / 2.0)
        axes.append(int(np.argmax(np.abs(e.geometry[1] - e.geometry[0]))))
    size = len(complex.edges)
    return CubeFamily(
        centers=np.asarray(centers),
        radii=np.full(size, 1.0 / (2.0 * k)),
        axes=np.asarray(axes),
        l=np.full(size, 1.0 / (4.0 * k)),
        big_l=np.full(size, 2.0 / k),
    )


def figure_eight_complex(second_width: float = math.sqrt(2.0)) -> CurveComplex:
    """Two rectangular lobes sharing one corner vertex at the origin.

    Lobe areas are 1 and ``second_width``; the default makes them pass the
    rational-independence heuristic.
    """
    if second_width <= 0:
        raise ValueError("second lobe width must be positive")
    w = float(second_width)
    v = np.array([[0.0, 0.0]])
    lobe_a = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
    lobe_b = np.array([[0, 0], [0, -1], [-w, -1], [-w, 0], [0, 0]], dtype=float)
    return CurveComplex(
        vertices=v,
        edges=(
            Edge(v_from=0, v_to=0, geometry=lobe_a),
            Edge(v_from=0, v_to=0, geometry=lobe_b),
        ),
    )


def tree_complex() -> CurveComplex:
    """A two-edge fork rooted at the origin."""
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    return CurveComplex(
        vertices=verts,
        edges=(
            Edge(v_from=0, v_to=1, geometry=np.array([[0.0, 0.0], [1.0, 0.0]])),
            Edge(v_from=0, v_to=2, geometry=np.array([[0.0, 0.0], [0.0, 1.0]])),
        ),
    )


def tree_walk_path() -> SampledPath:
    """Closed zero-based walk on the fork: out and back along both prongs."""
    pts = np.array(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]
    )
    return SampledPath(times=np.arange(5.0), points=pts, closed=True)


def circle_path(segments: int = 64, radius: float = 1.0, center=(0.0, 0.0)):
    """Closed regular-polygon approximation of a circle."""
    if segments < 3:
        raise ValueError("need at least 3 segments")
    cx, cy = float(center[0]), float(center[1])
    theta = 2.0 * np.pi * np.arange(segments) / segments
    pts = np.empty((segments + 1, 2))
    pts[:-1, 0] = cx + radius * np.cos(theta)
    pts[:-1, 1] = cy + radius * np.sin(theta)
    pts[-1] = pts[0]
    return SampledPath(
        times=np.linspace(0.0, 2.0 * np.pi, segments + 1), points=pts, closed=True
    )


def square_path() -> SampledPath:
    """Counterclockwise unit square starting and ending at the origin."""
    pts = np.array(
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]
    )
    return SampledPath(times=np.arange(5.0), points=pts, closed=True)


def commutator_path(second_width: float = math.sqrt(2.0)) -> SampledPath:
    """The loop-commutator walk a b a' b' on the two-lobe bouquet."""
    complex = figure_eight_complex(second_width)
    word = EdgeWord(((0, 1), (1, 1), (0, -1), (1, -1)))
    return realize(word, complex)


def universal_center_path(n_samples: int = 64) -> SampledPath:
    """Closed planar coefficient path that is an exact composition.

    The first coordinate walks an exactly symmetric sine table (so the two
    passes traverse identical chords), the second is its square; the image is
    a single arc, and the induced equation has an identity return map.
    """
    if n_samples % 4 != 0 or n_samples < 8:
        raise ValueError("n_samples must be a multiple of 4, at least 8")
    N = n_samples
    quarter = [math.sin(2.0 * math.pi * j / N) for j in range(N // 4 + 1)]
    quarter[0] = 0.0
    u = np.empty(N + 1)
    for j in range(N // 4 + 1):
        u[j] = quarter[j]
    for j in range(N // 4 + 1, N // 2 + 1):
        u[j] = quarter[N // 2 - j]
    for j in range(N // 2 + 1, N + 1):
        u[j] = -u[j - N // 2]
    pts = np.stack([u, u * u], axis=1)
    times = 2.0 * np.pi * np.arange(N + 1) / N
    return SampledPath(times=times, points=pts, closed=True)


def named_fixture(name: str, **params):
    """Dispatch for the CLI: returns {filename: document-ready object}."""
    from . import serialize

    if name == "grid":
        k = int(params.get("k", 2))
        return {"grid_k%d_complex.json" % k: serialize.complex_to_doc(grid_complex(k))}
    if name == "cube_grid":
        n = int(params.get("n", 3))
        k = int(params.get("k", 1))
        complex = cube_grid_complex(n, k)
        return {
            "cube_grid_n%d_k%d_complex.json" % (n, k): serialize.complex_to_doc(complex),
            "cube_grid_n%d_k%d_cubes.json"
            % (n, k): serialize.cubes_to_doc(cube_grid_family(complex, k)),
        }
    if name == "figure_eight":
        complex = figure_eight_complex(float(params.get("width", math.sqrt(2.0))))
        return {"figure_eight_complex.json": serialize.complex_to_doc(complex)}
    if name == "tree":
        return {
            "tree_complex.json": serialize.complex_to_doc(tree_complex()),
            "tree_walk_path.json": serialize.path_to_doc(tree_walk_path()),
        }
    if name == "circle_pl":
        seg = int(params.get("segments", 64))
        return {"circle_pl_path.json": serialize.path_to_doc(circle_path(seg))}
    if name == "commutator_path":
        return {
            "figure_eight_complex.json": serialize.complex_to_doc(
                figure_eight_complex()
            ),
            "commutator_path.json": serialize.path_to_doc(commutator_path()),
        }
    if name == "universal_center_abel":
        n = int(params.get("samples", 64))
        return {
            "universal_center_abel_path.json": serialize.path_to_doc(
                universal_center_path(n)
            )
        }
    raise ValueError("unknown fixture %r" % name)
