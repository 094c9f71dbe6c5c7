"""Sampled piecewise-linear paths, curve complexes, and tracing between them.

A :class:`SampledPath` is an ordered polyline in R^n.  A :class:`CurveComplex`
is the one-dimensional complex carried by the union of one or more path
images: vertices joined by edges with polyline geometry, edge interiors
pairwise disjoint.  :func:`build_complex` constructs the complex from paths,
:func:`trace_path` expresses a path on a complex as an :class:`EdgeWord`, and
:func:`realize` maps a word back to a path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    ComplexDisconnected,
    DegenerateGeometry,
    PathOffCurve,
    TraceError,
)

_PARALLEL_REL = 1e-12


def _as_readonly(a):
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SampledPath:
    """A parametrized polyline: strictly increasing times and one point each.

    ``closed`` asserts that the first and last points are identical (bitwise,
    after any ingestion snapping done by the caller).
    """

    times: np.ndarray
    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        times = np.ascontiguousarray(np.asarray(self.times, dtype=float))
        points = _as_readonly(self.points)
        if points.ndim != 2 or points.shape[1] < 1:
            raise ValueError("points must be a (samples, dim) array")
        if times.ndim != 1 or times.shape[0] != points.shape[0]:
            raise ValueError("times and points must have matching lengths")
        if times.shape[0] < 2:
            raise ValueError("a path needs at least 2 samples")
        if not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        if self.closed and not np.array_equal(points[0], points[-1]):
            raise ValueError("closed path must end exactly where it starts")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_samples(self) -> int:
        return self.points.shape[0]

    @classmethod
    def from_points(cls, points, closed=False, times=None):
        points = np.asarray(points, dtype=float)
        if times is None:
            times = np.arange(points.shape[0], dtype=float)
        return cls(times=np.asarray(times, dtype=float), points=points, closed=closed)

    def bounding_box(self):
        return self.points.min(axis=0), self.points.max(axis=0)

    def bbox_diameter(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def l1_length(self) -> float:
        return float(np.abs(np.diff(self.points, axis=0)).sum())

    def segment_starts(self):
        return self.points[:-1]

    def segment_ends(self):
        return self.points[1:]


@dataclass(frozen=True)
class Edge:
    """An edge of a complex: endpoint vertex ids plus polyline geometry.

    ``geometry[0]`` equals the ``v_from`` vertex and ``geometry[-1]`` the
    ``v_to`` vertex, exactly.
    """

    v_from: int
    v_to: int
    geometry: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "geometry", _as_readonly(self.geometry))
        if self.geometry.ndim != 2 or self.geometry.shape[0] < 2:
            raise ValueError("edge geometry needs at least 2 points")

    @property
    def is_loop(self) -> bool:
        return self.v_from == self.v_to

    @cached_property
    def seg_lengths(self):
        out = np.linalg.norm(np.diff(self.geometry, axis=0), axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def cum_lengths(self):
        out = np.concatenate([[0.0], np.cumsum(self.seg_lengths)])
        out.setflags(write=False)
        return out

    @property
    def length(self) -> float:
        return float(self.cum_lengths[-1])

    def l1_length(self) -> float:
        return float(np.abs(np.diff(self.geometry, axis=0)).sum())

    def point_at(self, s: float):
        """Point at arclength ``s`` from the ``v_from`` end."""
        cum = self.cum_lengths
        s = min(max(s, 0.0), cum[-1])
        k = int(np.searchsorted(cum, s, side="right") - 1)
        k = min(k, len(cum) - 2)
        seg = self.seg_lengths[k]
        t = 0.0 if seg == 0 else (s - cum[k]) / seg
        return self.geometry[k] * (1 - t) + self.geometry[k + 1] * t


@dataclass(frozen=True)
class CurveComplex:
    """A connected 1-complex: vertices, edges, and per-vertex incidences."""

    vertices: np.ndarray
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", _as_readonly(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.vertices.ndim != 2:
            raise ValueError("vertices must be a (V, dim) array")
        for e in self.edges:
            if not np.array_equal(e.geometry[0], self.vertices[e.v_from]):
                raise ValueError("edge start does not coincide with its vertex")
            if not np.array_equal(e.geometry[-1], self.vertices[e.v_to]):
                raise ValueError("edge end does not coincide with its vertex")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self):
        """Per-vertex tuple of incident edge ids; loop edges appear twice."""
        adj = [[] for _ in range(self.n_vertices)]
        for i, e in enumerate(self.edges):
            adj[e.v_from].append(i)
            adj[e.v_to].append(i)
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def bounding_box(self):
        los = [e.geometry.min(axis=0) for e in self.edges]
        his = [e.geometry.max(axis=0) for e in self.edges]
        return np.min(los, axis=0), np.max(his, axis=0)

    def bbox_diameter(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return False
        seen = {0}
        stack = [0]
        ends = [(e.v_from, e.v_to) for e in self.edges]
        incident = self.adjacency
        while stack:
            v = stack.pop()
            for ei in incident[v]:
                a, b = ends[ei]
                w = b if a == v else a
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def all_segments(self):
        """Flat arrays (starts, ends, edge_id, cum_s) over every geometry segment."""
        starts, ends, eids, cums = [], [], [], []
        for i, e in enumerate(self.edges):
            g = e.geometry
            starts.append(g[:-1])
            ends.append(g[1:])
            eids.append(np.full(g.shape[0] - 1, i))
            cums.append(e.cum_lengths[:-1])
        return (
            np.concatenate(starts),
            np.concatenate(ends),
            np.concatenate(eids),
            np.concatenate(cums),
        )


@dataclass(frozen=True)
class EdgeWord:
    """A sequence of oriented full edge traversals ``(edge_id, +1 | -1)``."""

    letters: tuple = field(default_factory=tuple)

    def __post_init__(self):
        letters = tuple((int(e), int(s)) for e, s in self.letters)
        for _, s in letters:
            if s not in (-1, 1):
                raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def inverse(self) -> "EdgeWord":
        return EdgeWord(tuple((e, -s) for e, s in reversed(self.letters)))

    def __mul__(self, other: "EdgeWord") -> "EdgeWord":
        return EdgeWord(self.letters + other.letters)

    def vertex_sequence(self, complex: CurveComplex):
        """Vertices visited by the word, length ``len(word) + 1``.

        Raises ``ValueError`` when consecutive letters do not share a vertex.
        """
        if not self.letters:
            return []
        verts = []
        for e, s in self.letters:
            edge = complex.edges[e]
            tail, head = (edge.v_from, edge.v_to) if s == 1 else (edge.v_to, edge.v_from)
            if not verts:
                verts.append(tail)
            elif verts[-1] != tail:
                raise ValueError("edge word is not a connected walk")
            verts.append(head)
        return verts

    def is_closed(self, complex: CurveComplex) -> bool:
        verts = self.vertex_sequence(complex)
        return not verts or verts[0] == verts[-1]


def default_snap_eps(paths) -> float:
    """1e-9 times the joint bounding-box diameter of the inputs."""
    los = [p.bounding_box()[0] for p in paths]
    his = [p.bounding_box()[1] for p in paths]
    diam = float(np.linalg.norm(np.max(his, axis=0) - np.min(los, axis=0)))
    if diam == 0:
        raise DegenerateGeometry("all input points coincide")
    return 1e-9 * diam


def _closest_params(p1, u1, p2, u2):
    """Clamped closest-approach parameters between segments (p1,u1), (p2,u2)."""
    a = float(u1 @ u1)
    b = float(u1 @ u2)
    c = float(u2 @ u2)
    w0 = p2 - p1
    d = float(u1 @ w0)
    e = float(u2 @ w0)
    den = a * c - b * b
    if den > _PARALLEL_REL * a * c:
        t = (c * d - b * e) / den
    else:
        t = 0.0
    # coordinate descent with clamping; exact after a few passes for a 2-var QP
    for _ in range(4):
        t = min(max(t, 0.0), 1.0)
        s = 0.0 if c == 0 else min(max((t * b - e) / c, 0.0), 1.0)
        t = 0.0 if a == 0 else (d + s * b) / a
    t = min(max(t, 0.0), 1.0)
    s = 0.0 if c == 0 else min(max((t * b - e) / c, 0.0), 1.0)
    gap = p1 + t * u1 - (p2 + s * u2)
    return t, s, float(np.linalg.norm(gap))


def _collect_cuts(starts, ends, eps):
    """Cut parameters per segment from pairwise intersections and overlaps."""
    S = starts.shape[0]
    u = ends - starts
    norms2 = np.einsum("ij,ij->i", u, u)
    lens = np.sqrt(norms2)
    if np.any(lens <= eps):
        raise DegenerateGeometry("zero-length segment in input path")
    cuts = [set() for _ in range(S)]
    for i in range(S):
        ui, pi = u[i], starts[i]
        for j in range(i + 1, S):
            uj, pj = u[j], starts[j]
            a, c = norms2[i], norms2[j]
            b = float(ui @ uj)
            den = a * c - b * b
            if den <= _PARALLEL_REL * a * c:
                # parallel: interact only if collinear within eps
                w0 = pj - pi
                perp0 = w0 - (float(ui @ w0) / a) * ui
                w1 = pj + uj - pi
                perp1 = w1 - (float(ui @ w1) / a) * ui
                if np.linalg.norm(perp0) > eps or np.linalg.norm(perp1) > eps:
                    continue
                t0 = float(ui @ w0) / a
                t1 = float(ui @ w1) / a
                if max(t0, t1) < 0 or min(t0, t1) > 1:
                    continue
                for t in (t0, t1):
                    if eps / lens[i] < t < 1 - eps / lens[i]:
                        cuts[i].add(t)
                s0 = float(uj @ (pi - pj)) / c
                s1 = float(uj @ (pi + ui - pj)) / c
                for s in (s0, s1):
                    if eps / lens[j] < s < 1 - eps / lens[j]:
                        cuts[j].add(s)
            else:
                t, s, dist = _closest_params(pi, ui, pj, uj)
                if dist <= eps:
                    if eps / lens[i] < t < 1 - eps / lens[i]:
                        cuts[i].add(t)
                    if eps / lens[j] < s < 1 - eps / lens[j]:
                        cuts[j].add(s)
    return cuts, lens


def _split_segments(starts, ends, cuts, lens, eps):
    """Subdivide segments at their cut parameters.

    Returns the point-pair pieces plus, per original segment, the range of
    piece indices it produced.
    """
    pieces = []
    ranges = []
    for i in range(starts.shape[0]):
        merged = []
        for t in sorted(cuts[i]):
            if merged and (t - merged[-1]) * lens[i] <= eps:
                continue
            merged.append(t)
        params = [0.0] + merged + [1.0]
        p, q = starts[i], ends[i]
        first = len(pieces)
        for t0, t1 in zip(params[:-1], params[1:]):
            pieces.append((p + t0 * (q - p), p + t1 * (q - p)))
        ranges.append((first, len(pieces)))
    return pieces, ranges


def _snap_points(points, eps):
    """Cluster points within eps (union-find); returns labels and representatives."""
    pts = np.asarray(points)
    P = pts.shape[0]
    parent = list(range(P))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    # pairwise comparison in blocks; corpora are small
    block = 2048
    for i0 in range(0, P, block):
        a = pts[i0 : i0 + block]
        for j0 in range(i0, P, block):
            b = pts[j0 : j0 + block]
            d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
            ii, jj = np.nonzero(d <= eps)
            for x, y in zip(ii, jj):
                gi, gj = i0 + int(x), j0 + int(y)
                if gi != gj:
                    union(gi, gj)

    roots = {}
    labels = np.empty(P, dtype=int)
    for i in range(P):
        r = find(i)
        if r not in roots:
            roots[r] = len(roots)
        labels[i] = roots[r]
    reps = np.zeros((len(roots), pts.shape[1]))
    counts = np.zeros(len(roots))
    for i in range(P):
        reps[labels[i]] += pts[i]
        counts[labels[i]] += 1
    reps /= counts[:, None]
    return labels, reps


def build_complex(paths, snap_eps=None) -> CurveComplex:
    """Build the curve complex carried by the union of the path images.

    All pairwise segment crossings, touchings, and collinear overlaps become
    shared structure; branch points and open-path endpoints become vertices;
    runs of degree-2 interior points are merged into single polyline edges.
    A component that is a bare cycle gets one vertex at its lexicographically
    smallest point.
    """
    if isinstance(paths, SampledPath):
        paths = [paths]
    if not paths:
        raise ValueError("need at least one path")
    dim = paths[0].dim
    for p in paths:
        if p.dim != dim:
            raise ValueError("all paths must share one dimension")
    if snap_eps is None:
        snap_eps = default_snap_eps(paths)
    if snap_eps <= 0:
        raise ValueError("snap_eps must be positive")

    starts = np.concatenate([p.segment_starts() for p in paths])
    ends = np.concatenate([p.segment_ends() for p in paths])
    cuts, lens = _collect_cuts(starts, ends, snap_eps)
    pieces, piece_ranges = _split_segments(starts, ends, cuts, lens, snap_eps)

    pts = np.array([pt for piece in pieces for pt in piece])
    labels, reps = _snap_points(pts, snap_eps)

    seg_nodes = set()
    for k in range(len(pieces)):
        a, b = int(labels[2 * k]), int(labels[2 * k + 1])
        if a == b:
            orig_len = np.linalg.norm(pieces[k][1] - pieces[k][0])
            if orig_len > 3 * snap_eps:
                raise DegenerateGeometry("segment collapsed under snapping")
            continue  # sub-eps sliver; absorbed by the cluster
        seg_nodes.add((min(a, b), max(a, b)))
    if not seg_nodes:
        raise DegenerateGeometry("no segments survive snapping")

    node_adj = {}
    for a, b in seg_nodes:
        node_adj.setdefault(a, []).append(b)
        node_adj.setdefault(b, []).append(a)

    # connectivity over nodes
    nodes = sorted(node_adj)
    comp = {}
    for n in nodes:
        if n in comp:
            continue
        stack, members = [n], []
        comp[n] = n
        while stack:
            x = stack.pop()
            members.append(x)
            for y in node_adj[x]:
                if y not in comp:
                    comp[y] = n
                    stack.append(y)
    comp_ids = sorted(set(comp.values()))
    if len(comp_ids) > 1:
        sizes = [sum(1 for n in nodes if comp[n] == c) for c in comp_ids]
        raise ComplexDisconnected(sizes)

    # forced vertices: open-path endpoints and every node of degree != 2
    forced = set()
    offset = 0
    for p in paths:
        n_seg = p.n_samples - 1
        if not p.closed:
            first_piece = piece_ranges[offset][0]
            last_piece = piece_ranges[offset + n_seg - 1][1] - 1
            forced.add(int(labels[2 * first_piece]))
            forced.add(int(labels[2 * last_piece + 1]))
        offset += n_seg

    for n in nodes:
        if len(node_adj[n]) != 2:
            forced.add(n)

    # bare-cycle components: force their lexicographically smallest node
    comp_members = {}
    for n in nodes:
        comp_members.setdefault(comp[n], []).append(n)
    for c, members in comp_members.items():
        if not any(m in forced for m in members):
            best = min(members, key=lambda m: tuple(reps[m]))
            forced.add(best)

    # walk degree-2 chains between forced vertices
    unit = {}
    for a, b in seg_nodes:
        unit.setdefault(a, []).append((a, b))
        unit.setdefault(b, []).append((b, a))
    used = set()
    chains = []
    for v in sorted(forced, key=lambda m: tuple(reps[m])):
        for dart in sorted(unit[v], key=lambda d: tuple(reps[d[1]])):
            key = (min(dart), max(dart))
            if key in used:
                continue
            used.add(key)
            chain = [dart[0], dart[1]]
            while chain[-1] not in forced:
                cur, prev = chain[-1], chain[-2]
                nxts = [w for w in node_adj[cur] if w != prev]
                if len(nxts) != 1:
                    # multi-edge between two nodes collapses here; treat as branch
                    raise DegenerateGeometry("ambiguous degree-2 chain")
                used.add((min(cur, nxts[0]), max(cur, nxts[0])))
                chain.append(nxts[0])
            chains.append(chain)

    vertex_nodes = sorted(forced, key=lambda m: tuple(reps[m]))
    v_index = {n: i for i, n in enumerate(vertex_nodes)}
    vertices = reps[vertex_nodes]

    def chain_key(ch):
        return [tuple(reps[n]) for n in ch]

    canonical = []
    for ch in chains:
        rev = list(reversed(ch))
        canonical.append(ch if chain_key(ch) <= chain_key(rev) else rev)
    canonical.sort(key=chain_key)

    edges = []
    for ch in canonical:
        geom = reps[ch].copy()
        vf, vt = v_index[ch[0]], v_index[ch[-1]]
        geom[0] = vertices[vf]
        geom[-1] = vertices[vt]
        edges.append(Edge(v_from=vf, v_to=vt, geometry=geom))

    return CurveComplex(vertices=vertices, edges=tuple(edges))


def validate_complex(complex: CurveComplex, eps=None):
    """Check the CW conditions on an externally supplied complex.

    Verifies connectivity, endpoint incidence (done at construction), that no
    vertex lies in an edge interior, and that edge interiors do not cross.
    """
    if not complex.is_connected():
        raise ComplexDisconnected([complex.n_vertices])
    if eps is None:
        eps = 1e-9 * max(complex.bbox_diameter(), 1.0)
    starts, ends, eids, cums = complex.all_segments()
    u = ends - starts
    lens = np.linalg.norm(u, axis=1)
    if np.any(lens <= eps):
        raise DegenerateGeometry("zero-length edge segment")
    # vertices must stay off edge interiors
    for vi, v in enumerate(complex.vertices):
        t = np.clip(np.einsum("ij,ij->i", v - starts, u) / lens**2, 0, 1)
        proj = starts + t[:, None] * u
        d = np.linalg.norm(proj - v, axis=1)
        for k in np.nonzero(d <= eps)[0]:
            e = complex.edges[eids[k]]
            s = cums[k] + t[k] * lens[k]
            interior = eps < s < e.length - eps
            if interior:
                raise DegenerateGeometry(
                    "vertex %d lies inside edge %d" % (vi, eids[k])
                )
    # edge interiors must not cross each other
    S = starts.shape[0]
    for i in range(S):
        for j in range(i + 1, S):
            t, s, dist = _closest_params(starts[i], u[i], starts[j], u[j])
            if dist > eps:
                continue
            si = cums[i] + t * lens[i]
            sj = cums[j] + s * lens[j]
            ei, ej = int(eids[i]), int(eids[j])
            at_vertex_i = (
                si <= eps or si >= complex.edges[ei].length - eps
            )
            at_vertex_j = (
                sj <= eps or sj >= complex.edges[ej].length - eps
            )
            same_edge_touch = ei == ej and abs(si - sj) <= eps
            if not (same_edge_touch or (at_vertex_i and at_vertex_j)):
                raise DegenerateGeometry(
                    "edges %d and %d meet away from vertices" % (ei, ej)
                )


def locate_point(complex: CurveComplex, point, segments=None):
    """Nearest location on the complex: (distance, edge_id, arclength)."""
    if segments is None:
        segments = complex.all_segments()
    starts, ends, eids, cums = segments
    u = ends - starts
    norms2 = np.einsum("ij,ij->i", u, u)
    t = np.clip(np.einsum("ij,ij->i", point - starts, u) / norms2, 0, 1)
    proj = starts + t[:, None] * u
    d = np.linalg.norm(proj - point, axis=1)
    k = int(np.argmin(d))
    s = cums[k] + t[k] * np.sqrt(norms2[k])
    return float(d[k]), int(eids[k]), float(s)


def _classify(complex, point, tol, segments):
    """Classify a point as ("vertex", v) or ("edge", e, s); None when off-curve."""
    dv = np.linalg.norm(complex.vertices - point, axis=1)
    v = int(np.argmin(dv))
    if dv[v] <= tol:
        return ("vertex", v)
    d, e, s = locate_point(complex, point, segments)
    if d > tol:
        return None
    return ("edge", e, s)


def trace_path(path: SampledPath, complex: CurveComplex, tol=None) -> EdgeWord:
    """Express a path lying on a complex as a word of full edge traversals.

    Full passes over an edge followed by full returns are kept as
    ``(e, +1)(e, -1)``; excursions into an edge shallower than ``tol`` are
    dropped.  A closed path starting mid-edge yields the cyclically stitched
    word.  Raises :class:`PathOffCurve` for samples off the complex and
    :class:`TraceError` for on-curve paths that are not edge walks.
    """
    if path.dim != complex.dim:
        raise ValueError("path and complex dimensions differ")
    if tol is None:
        tol = 10 * 1e-9 * max(complex.bbox_diameter(), 1.0)
    segments = complex.all_segments()

    for idx in range(path.n_samples):
        d, _, _ = locate_point(complex, path.points[idx], segments)
        dv = np.linalg.norm(complex.vertices - path.points[idx], axis=1).min()
        if min(d, dv) > tol:
            raise PathOffCurve(idx, min(d, dv))

    # refine: insert the parameter of every vertex the segment passes through
    refined = []
    for k in range(path.n_samples - 1):
        p, q = path.points[k], path.points[k + 1]
        refined.append((p, k))
        u = q - p
        n2 = float(u @ u)
        if n2 == 0:
            continue
        tcuts = []
        tv = np.clip((complex.vertices - p) @ u / n2, 0, 1)
        proj = p + tv[:, None] * u
        dv = np.linalg.norm(proj - complex.vertices, axis=1)
        for vi in np.nonzero(dv <= tol)[0]:
            if 0 < tv[vi] < 1:
                tcuts.append(float(tv[vi]))
        pts = [0.0] + sorted(tcuts) + [1.0]
        for t0, t1 in zip(pts[:-1], pts[1:]):
            if t1 > t0:
                refined.append((p + t0 * u + 0.5 * (t1 - t0) * u, k))  # midpoint
                if t1 < 1.0:
                    refined.append((p + t1 * u, k))
    refined.append((path.points[-1], path.n_samples - 1))

    events = []
    for pt, k in refined:
        ev = _classify(complex, pt, tol, segments)
        if ev is None:
            raise PathOffCurve(k, None)
        if events and ev == events[-1]:
            continue
        if (
            events
            and ev[0] == "vertex"
            and events[-1][0] == "vertex"
            and ev[1] == events[-1][1]
        ):
            continue
        events.append(ev)

    # group into runs: (v_before | None, edge, [s...], v_after | None)
    runs = []
    i = 0
    n = len(events)
    while i < n:
        if events[i][0] == "vertex":
            i += 1
            continue
        v_before = events[i - 1][1] if i > 0 and events[i - 1][0] == "vertex" else None
        e = events[i][1]
        svals = []
        while i < n and events[i][0] == "edge":
            if events[i][1] != e:
                raise TraceError(
                    "path jumps from edge %d to %d without passing a vertex"
                    % (e, events[i][1])
                )
            svals.append(events[i][2])
            i += 1
        v_after = events[i][1] if i < n and events[i][0] == "vertex" else None
        runs.append([v_before, e, svals, v_after])

    # closed path starting mid-edge: stitch trailing run into leading run
    if (
        path.closed
        and len(runs) >= 1
        and runs[0][0] is None
        and runs[-1][3] is None
    ):
        if len(runs) > 1:
            if runs[0][1] != runs[-1][1]:
                raise TraceError("closed path does not stitch over one edge")
            merged = [runs[-1][0], runs[-1][1], runs[-1][2] + runs[0][2], runs[0][3]]
            runs = runs[1:-1] + [merged]
        # single run on one edge: leave as is; handled below via s-trajectory

    def entry_boundary(edge, v, L, s_ref):
        cands = []
        if edge.v_from == v:
            cands.append(0.0)
        if edge.v_to == v:
            cands.append(L)
        if not cands:
            raise TraceError("run boundary vertex is not an endpoint of its edge")
        if len(cands) == 1:
            return cands[0]
        return 0.0 if s_ref <= L - s_ref else L  # loop edge: nearest end

    letters = []
    for v_before, e, svals, v_after in runs:
        edge = complex.edges[e]
        L = edge.length
        traj = list(svals)
        if not traj:
            continue
        if v_before is not None:
            traj = [entry_boundary(edge, v_before, L, traj[0])] + traj
        if v_after is not None:
            traj = traj + [entry_boundary(edge, v_after, L, traj[-1])]
        boundary = 0.0 if traj[0] <= L / 2 else L
        pending = 0.0
        for s in traj:
            if abs(s - (L - boundary)) <= tol:
                letters.append((e, +1 if boundary == 0.0 else -1))
                boundary = L - boundary
                pending = 0.0
            else:
                pending = max(pending, min(s, L - s))
        if v_after is not None and pending > max(10 * tol, 1e-7 * L):
            raise TraceError(
                "path turns around inside edge %d without reaching its end" % e
            )

    return EdgeWord(tuple(letters))


def realize(word: EdgeWord, complex: CurveComplex, base_vertex=None) -> SampledPath:
    """Polyline path traversing the word's edges in order.

    The empty word realizes as a constant two-sample path at ``base_vertex``
    (default: vertex 0).  Times are cumulative Euclidean arclength.
    """
    if not word.letters:
        v = complex.vertices[base_vertex if base_vertex is not None else 0]
        return SampledPath(
            times=np.array([0.0, 1.0]), points=np.array([v, v]), closed=True
        )
    verts = word.vertex_sequence(complex)
    pts = []
    for (e, s), tail in zip(word.letters, verts[:-1]):
        g = complex.edges[e].geometry
        run = g if s == 1 else g[::-1]
        if pts:
            run = run[1:]
        pts.extend(run)
    pts = np.array(pts)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    times = np.concatenate([[0.0], np.cumsum(seg)])
    closed = verts[0] == verts[-1]
    if closed:
        pts[-1] = pts[0]
    return SampledPath(times=times, points=pts, closed=closed)
