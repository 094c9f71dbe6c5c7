"""Planar arrangement faces, inscribed squares, finiteness bounds, windings.

The 2-D bound is ``floor((27*pi/2) * A_max * d / r_min**3) + 1`` over the
bounded faces of the arrangement; the n-D bound is
``floor(2*pi*n * L_max * d / (r_min * l_min)) + 1`` over a certified family of
disjoint axis-aligned cubes around the edges.  Both return 0 for complexes
with trivial first homology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve_model import CurveComplex, SampledPath
from .errors import (
    ConditionStarViolated,
    DegenerateGeometry,
    PointOnCurve,
)
from .topology import betti1
from .util import thread_count


# ---------------------------------------------------------------------------
# low-level planar helpers


def shoelace_area(loop) -> float:
    """Signed area of a closed polyline (first point equals last)."""
    x = loop[:, 0]
    y = loop[:, 1]
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def winding_of_loop(loop, point) -> int:
    """Winding number of a closed polyline around a point (crossing rule)."""
    x0, y0 = loop[:-1, 0], loop[:-1, 1]
    x1, y1 = loop[1:, 0], loop[1:, 1]
    px, py = point
    cross = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (cross > 0)
    down = (y0 > py) & (y1 <= py) & (cross < 0)
    return int(np.sum(up) - np.sum(down))


def winding_of_loop_many(loop, points) -> np.ndarray:
    """Winding numbers of one loop around many points, shape (P,)."""
    pts = np.atleast_2d(points)
    x0, y0 = loop[:-1, 0][None, :], loop[:-1, 1][None, :]
    x1, y1 = loop[1:, 0][None, :], loop[1:, 1][None, :]
    px, py = pts[:, 0][:, None], pts[:, 1][:, None]
    cross = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (cross > 0)
    down = (y0 > py) & (y1 <= py) & (cross < 0)
    return (up.sum(axis=1) - down.sum(axis=1)).astype(int)


def _loop_segments(loop):
    return loop[:-1], loop[1:]


def point_segment_distance(points, starts, ends):
    """Euclidean distances, shape (len(points), len(starts))."""
    points = np.atleast_2d(points)
    u = ends - starts
    n2 = np.einsum("ij,ij->i", u, u)
    n2 = np.where(n2 == 0, 1.0, n2)
    w = points[:, None, :] - starts[None, :, :]
    t = np.clip(np.einsum("psd,sd->ps", w, u) / n2[None, :], 0.0, 1.0)
    proj = starts[None, :, :] + t[..., None] * u[None, :, :]
    return np.linalg.norm(points[:, None, :] - proj, axis=2)


def linf_point_segment_distance(points, starts, ends):
    """Chebyshev distances from points to segments, shape (P, S).

    The minimum over the segment parameter of ``max_c |p_c - q_c(t)|`` is
    attained at t in {0, 1}, at a coordinate zero-crossing, or where two
    coordinate deviations tie in absolute value; all candidates are evaluated.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    ends = np.atleast_2d(np.asarray(ends, dtype=float))
    P, S, n = points.shape[0], starts.shape[0], points.shape[1]
    u = (ends - starts)[None, :, :]  # (1,S,n)
    w = points[:, None, :] - starts[None, :, :]  # (P,S,n)

    cands = [np.zeros((P, S)), np.ones((P, S))]
    with np.errstate(divide="ignore", invalid="ignore"):
        for c in range(n):
            t = w[..., c] / u[..., c]
            cands.append(np.where(np.isfinite(t), t, 0.0))
        for a in range(n):
            for b in range(a + 1, n):
                for sgn in (1.0, -1.0):
                    den = u[..., a] - sgn * u[..., b]
                    t = (w[..., a] - sgn * w[..., b]) / den
                    cands.append(np.where(np.isfinite(t), t, 0.0))
    best = np.full((P, S), np.inf)
    for t in cands:
        t = np.clip(t, 0.0, 1.0)
        dev = np.abs(w - t[..., None] * u)
        best = np.minimum(best, dev.max(axis=2))
    return best


# ---------------------------------------------------------------------------
# faces of the planar subdivision


@dataclass(frozen=True)
class Face:
    """A bounded face: outer loop (CCW), optional holes (CW), and metrics."""

    outer: np.ndarray
    holes: tuple
    area: float
    rep_point: np.ndarray
    inscribed_side: float

    def boundary_segments(self):
        starts = [self.outer[:-1]]
        ends = [self.outer[1:]]
        for h in self.holes:
            starts.append(h[:-1])
            ends.append(h[1:])
        return np.concatenate(starts), np.concatenate(ends)

    def contains(self, point) -> bool:
        if winding_of_loop(self.outer, point) == 0:
            return False
        return all(winding_of_loop(h, point) == 0 for h in self.holes)


@dataclass(frozen=True)
class FaceSet:
    """All bounded faces of a planar complex plus the global bound inputs."""

    faces: tuple

    @property
    def m(self) -> int:
        return len(self.faces)

    @property
    def r_min(self) -> float:
        return min(f.inscribed_side for f in self.faces)

    @property
    def a_max(self) -> float:
        return max(f.area for f in self.faces)

    @property
    def half_side(self) -> float:
        """Half side of the smallest axis-aligned square containing all faces."""
        lo = np.min([f.outer.min(axis=0) for f in self.faces], axis=0)
        hi = np.max([f.outer.max(axis=0) for f in self.faces], axis=0)
        return float(max(hi - lo) / 2.0)

    def total_area(self) -> float:
        return sum(f.area for f in self.faces)


def _face_orbits(complex: CurveComplex):
    """Orbits of the next-dart-in-face map; each orbit is a list of darts."""
    darts = []  # (edge_id, dir)
    for i in range(complex.n_edges):
        darts.append((i, 1))
        darts.append((i, -1))

    def tail(d):
        e = complex.edges[d[0]]
        return e.v_from if d[1] == 1 else e.v_to

    def head(d):
        e = complex.edges[d[0]]
        return e.v_to if d[1] == 1 else e.v_from

    def out_dir(d):
        g = complex.edges[d[0]].geometry
        v = g[1] - g[0] if d[1] == 1 else g[-2] - g[-1]
        return math.atan2(v[1], v[0])

    outgoing = {v: [] for v in range(complex.n_vertices)}
    for d in darts:
        outgoing[tail(d)].append(d)
    for v in outgoing:
        outgoing[v].sort(key=lambda d: (out_dir(d), d))

    def next_in_face(d):
        rev = (d[0], -d[1])
        ring = outgoing[head(d)]
        k = ring.index(rev)
        return ring[(k - 1) % len(ring)]

    seen = set()
    orbits = []
    for d in darts:
        if d in seen:
            continue
        orbit = []
        cur = d
        while cur not in seen:
            seen.add(cur)
            orbit.append(cur)
            cur = next_in_face(cur)
        orbits.append(orbit)
    return orbits


def _orbit_loop(complex: CurveComplex, orbit):
    """Closed polyline traced by an orbit of darts."""
    pts = []
    for e, s in orbit:
        g = complex.edges[e].geometry
        run = g if s == 1 else g[::-1]
        if pts:
            run = run[1:]
        pts.extend(np.asarray(run))
    pts.append(pts[0])
    # drop the duplicated final junction of the last dart
    out = np.asarray(pts)
    if np.array_equal(out[-2], out[-1]):
        out = out[:-1]
    return out


def _interior_point(loop, margin):
    """A point strictly inside a closed loop (nonzero winding), off the boundary."""
    ys = np.unique(loop[:, 1])
    if len(ys) < 2:
        raise DegenerateGeometry("face with empty interior")
    starts, ends = _loop_segments(loop)
    mids = (ys[:-1] + ys[1:]) / 2.0
    order = np.argsort(np.abs(mids - (ys[0] + ys[-1]) / 2.0))
    for yi in order:
        y = mids[yi]
        y0, y1 = starts[:, 1], ends[:, 1]
        hit = ((y0 <= y) & (y1 > y)) | ((y1 <= y) & (y0 > y))
        if not np.any(hit):
            continue
        t = (y - y0[hit]) / (y1[hit] - y0[hit])
        xs = np.sort(starts[hit, 0] + t * (ends[hit, 0] - starts[hit, 0]))
        for x0, x1 in zip(xs[:-1], xs[1:]):
            if x1 - x0 <= 2 * margin:
                continue
            cand = np.array([(x0 + x1) / 2.0, y])
            if winding_of_loop(loop, cand) != 0:
                d = point_segment_distance(cand[None, :], starts, ends).min()
                if d > margin:
                    return cand
    raise DegenerateGeometry("face with empty interior")


def extract_faces(complex: CurveComplex, inscribed_eps: float = 1e-9) -> FaceSet:
    """All bounded faces of the planar subdivision carried by the complex.

    Faces are found as orbits of the angular-sweep next-dart map; bounded
    orbits have positive signed area.  Faces come back sorted by their
    representative interior point.
    """
    if complex.dim != 2:
        raise ValueError("face extraction requires a planar complex")
    orbits = _face_orbits(complex)
    loops = [_orbit_loop(complex, o) for o in orbits]
    areas = [shoelace_area(l) for l in loops]

    scale = max(complex.bbox_diameter(), 1.0)
    bounded = [
        (loop, a) for loop, a in zip(loops, areas) if a > (1e-12 * scale) ** 2
    ]
    expected = betti1(complex)
    if len(bounded) != expected:
        raise DegenerateGeometry(
            "face extraction found %d bounded faces, homology expects %d"
            % (len(bounded), expected)
        )
    if abs(sum(areas)) > 1e-9 * scale**2:
        raise DegenerateGeometry("face orbits do not cancel; non-planar input")

    reps = [_interior_point(loop, margin=1e-12 * scale) for loop, _ in bounded]

    def side_of(idx):
        loop, _ = bounded[idx]
        return inscribed_square_side_of_loops(loop, (), eps=inscribed_eps, hint=reps[idx])

    workers = thread_count()
    if workers > 1 and len(bounded) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            sides = list(pool.map(side_of, range(len(bounded))))
    else:
        sides = [side_of(i) for i in range(len(bounded))]

    faces = [
        Face(outer=loop, holes=(), area=area, rep_point=rep, inscribed_side=side)
        for (loop, area), rep, side in zip(bounded, reps, sides)
    ]
    faces.sort(key=lambda f: tuple(f.rep_point))
    return FaceSet(faces=tuple(faces))


# ---------------------------------------------------------------------------
# inscribed squares


def inscribed_square_side_of_loops(outer, holes, eps, hint=None):
    """Certified side of the largest open axis-aligned square in the face.

    Branch-and-bound maximization of the Chebyshev distance to the face
    complement (1-Lipschitz in that metric), returning ``r`` with
    ``r <= true side < r + eps``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    starts_l = [outer[:-1]]
    ends_l = [outer[1:]]
    for h in holes:
        starts_l.append(h[:-1])
        ends_l.append(h[1:])
    starts = np.concatenate(starts_l)
    ends = np.concatenate(ends_l)

    def depth(points):
        points = np.atleast_2d(points)
        inside = winding_of_loop_many(outer, points) != 0
        for h in holes:
            inside &= winding_of_loop_many(h, points) == 0
        d = linf_point_segment_distance(points, starts, ends).min(axis=1)
        return np.where(inside, d, 0.0)

    lo = outer.min(axis=0)
    hi = outer.max(axis=0)
    center = (lo + hi) / 2.0
    half = float(max(hi - lo) / 2.0)
    enclosed = abs(shoelace_area(outer)) - sum(abs(shoelace_area(h)) for h in holes)
    if half == 0 or enclosed <= (1e-12 * max(half, 1.0)) ** 2:
        raise DegenerateGeometry("face with empty interior")

    centers = center[None, :]
    halves = np.array([half])
    best = 0.0
    if hint is not None:
        best = float(depth(np.asarray(hint)[None, :])[0])

    max_frontier = 400_000
    while centers.shape[0]:
        vals = depth(centers)
        best = max(best, float(vals.max()))
        ub = vals + halves
        keep = ub > best + eps / 2.0
        centers = centers[keep]
        halves = halves[keep]
        if centers.shape[0] > max_frontier:
            raise DegenerateGeometry("inscribed-square refinement did not converge")
        if not centers.shape[0]:
            break
        h = halves / 2.0
        offs = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        centers = (centers[:, None, :] + offs[None, :, :] * h[:, None, None]).reshape(
            -1, 2
        )
        halves = np.repeat(h, 4)
    if best <= 0.0:
        raise DegenerateGeometry("face with empty interior")
    return 2.0 * best


def inscribed_square_side(face: Face, eps: float) -> float:
    """Certified lower bound on the face's largest axis-aligned square side."""
    return inscribed_square_side_of_loops(
        face.outer, face.holes, eps=eps, hint=face.rep_point
    )


# ---------------------------------------------------------------------------
# the finiteness bounds


def n_bound_2d(faceset: FaceSet) -> int:
    """floor((27*pi/2) * A_max * d / r_min**3) + 1; zero without faces."""
    if faceset.m == 0:
        return 0
    value = (
        (27.0 * math.pi / 2.0)
        * faceset.a_max
        * faceset.half_side
        / faceset.r_min**3
    )
    return int(math.floor(value)) + 1


def winding_number(path: SampledPath, point, tol=None) -> int:
    """Signed winding number of a closed planar path around a point."""
    if path.dim != 2:
        raise ValueError("winding numbers require planar paths")
    if not path.closed:
        raise ValueError("winding numbers require closed paths")
    point = np.asarray(point, dtype=float)
    if tol is None:
        tol = 1e-12 * max(path.bbox_diameter(), 1.0)
    d = point_segment_distance(
        point[None, :], path.segment_starts(), path.segment_ends()
    ).min()
    if d <= tol:
        raise PointOnCurve("query point lies on the path")
    return winding_of_loop(path.points, point)


# ---------------------------------------------------------------------------
# cube families for the n-dimensional bound


@dataclass(frozen=True)
class CubeFamily:
    """Per-edge open cubes certifying the n-D bound.

    ``centers[i]`` lies on edge ``i``, ``radii[i]`` is the cube half-side,
    ``axes[i]`` the 0-based coordinate with injective projection, ``l[i]`` a
    positive lower bound on the projected measure of the half-cube portion of
    the edge, and ``big_l[i]`` an upper bound on the edge's l1 length.
    """

    centers: np.ndarray
    radii: np.ndarray
    axes: np.ndarray
    l: np.ndarray
    big_l: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "centers", np.asarray(self.centers, dtype=float))
        object.__setattr__(self, "radii", np.asarray(self.radii, dtype=float))
        object.__setattr__(self, "axes", np.asarray(self.axes, dtype=int))
        object.__setattr__(self, "l", np.asarray(self.l, dtype=float))
        object.__setattr__(self, "big_l", np.asarray(self.big_l, dtype=float))

    @property
    def size(self) -> int:
        return self.centers.shape[0]

    @property
    def r_min(self) -> float:
        return float(self.radii.min())

    @property
    def l_min(self) -> float:
        return float(self.l.min())

    @property
    def big_l_max(self) -> float:
        return float(self.big_l.max())


def _edge_portion_in_cube(edge, center, radius):
    """Arclength intervals of an edge inside an open axis-aligned cube."""
    g = edge.geometry
    cum = edge.cum_lengths
    intervals = []
    for k in range(g.shape[0] - 1):
        a, b = g[k], g[k + 1]
        u = b - a
        t0, t1 = 0.0, 1.0
        ok = True
        for c in range(g.shape[1]):
            lo = center[c] - radius
            hi = center[c] + radius
            if u[c] == 0:
                if not (lo < a[c] < hi):
                    ok = False
                    break
            else:
                ta = (lo - a[c]) / u[c]
                tb = (hi - a[c]) / u[c]
                t0 = max(t0, min(ta, tb))
                t1 = min(t1, max(ta, tb))
        if ok and t1 > t0:
            seg = edge.seg_lengths[k]
            intervals.append((cum[k] + t0 * seg, cum[k] + t1 * seg, k, t0, t1))
    # merge touching intervals
    merged = []
    for iv in intervals:
        if merged and iv[0] <= merged[-1][1] + 1e-12 * max(edge.length, 1.0):
            prev = merged[-1]
            merged[-1] = (prev[0], iv[1], prev[2], prev[3], iv[4])
        else:
            merged.append(iv)
    return intervals, merged


def _projection_measure(edge, center, radius, axis):
    """Measure of the axis projection of the edge portion inside the cube."""
    intervals, merged = _edge_portion_in_cube(edge, center, radius)
    if not intervals:
        return 0.0
    lo = np.inf
    hi = -np.inf
    g = edge.geometry
    for s0, s1, _, _, _ in intervals:
        for s in (s0, s1):
            p = edge.point_at(s)
            lo = min(lo, p[axis])
            hi = max(hi, p[axis])
    # interior polyline nodes inside the cube also bound the projection
    cum = edge.cum_lengths
    for k in range(g.shape[0]):
        if any(s0 - 1e-15 <= cum[k] <= s1 + 1e-15 for s0, s1, *_ in intervals):
            lo = min(lo, g[k, axis])
            hi = max(hi, g[k, axis])
    return float(hi - lo)


def validate_cube_family(complex: CurveComplex, family: CubeFamily, tol=None):
    """Certify the cube-family conditions constructively for PL edges.

    Checks: one cube per edge, centers on their edges, pairwise disjoint open
    cubes, each cube meets no other edge, meets its own edge in a single
    interval, the chosen coordinate is strictly monotone there, and the stated
    ``l``/``big_l`` values are conservative for the measured geometry.
    Raises :class:`ConditionStarViolated` naming the failing clause.
    """
    n = complex.dim
    if family.size != complex.n_edges:
        raise ConditionStarViolated(
            "center", family.size, detail="family must have one cube per edge"
        )
    if tol is None:
        tol = 1e-9 * max(complex.bbox_diameter(), 1.0)

    for i in range(family.size):
        c = family.centers[i]
        r = float(family.radii[i])
        axis = int(family.axes[i])
        if not (0 <= axis < n):
            raise ConditionStarViolated("injective", i, detail="axis out of range")
        if r <= 0:
            raise ConditionStarViolated("center", i, detail="radius must be positive")
        e = complex.edges[i]
        d_own = point_segment_distance(
            c[None, :], e.geometry[:-1], e.geometry[1:]
        ).min()
        if d_own > tol:
            raise ConditionStarViolated("center", i, detail="center is off its edge")

        # cube avoids every other edge
        for j in range(complex.n_edges):
            if j == i:
                continue
            ej = complex.edges[j]
            d = linf_point_segment_distance(
                c[None, :], ej.geometry[:-1], ej.geometry[1:]
            ).min()
            if d < r - tol:
                raise ConditionStarViolated("other_edge", i, j)

        intervals, merged = _edge_portion_in_cube(e, c, r)
        if len(merged) != 1:
            raise ConditionStarViolated(
                "connected", i, detail="%d intersection intervals" % len(merged)
            )
        # strict monotonicity of the chosen coordinate across the portion
        s0, s1 = merged[0][0], merged[0][1]
        signs = set()
        for k in range(e.geometry.shape[0] - 1):
            a_s, b_s = e.cum_lengths[k], e.cum_lengths[k + 1]
            if b_s <= s0 + tol or a_s >= s1 - tol:
                continue
            d_axis = e.geometry[k + 1, axis] - e.geometry[k, axis]
            if d_axis == 0:
                raise ConditionStarViolated(
                    "injective", i, detail="flat coordinate inside cube"
                )
            signs.add(1 if d_axis > 0 else -1)
        if len(signs) > 1:
            raise ConditionStarViolated(
                "injective", i, detail="coordinate reverses inside cube"
            )

        measured = _projection_measure(e, c, r / 2.0, axis)
        if not (0 < family.l[i] <= measured + tol):
            raise ConditionStarViolated(
                "measure",
                i,
                detail="stated l=%g exceeds measured %g" % (family.l[i], measured),
            )
        if family.big_l[i] < e.l1_length() - tol:
            raise ConditionStarViolated(
                "measure",
                i,
                detail="stated L=%g below edge l1 length %g"
                % (family.big_l[i], e.l1_length()),
            )

    # pairwise disjoint open cubes
    for i in range(family.size):
        for j in range(i + 1, family.size):
            gap = float(
                np.max(np.abs(family.centers[i] - family.centers[j]))
            )
            if gap < family.radii[i] + family.radii[j] - tol:
                raise ConditionStarViolated("disjoint", i, j)


def auto_cube_family(complex: CurveComplex) -> CubeFamily:
    """Greedy certified cube family: midpoint centers, halving radii."""
    n = complex.dim
    centers, radii, axes, ls, Ls = [], [], [], [], []
    scale = max(complex.bbox_diameter(), 1.0)
    for i, e in enumerate(complex.edges):
        c = e.point_at(e.length / 2.0)
        cum = e.cum_lengths
        k = int(np.searchsorted(cum, e.length / 2.0, side="right") - 1)
        k = min(k, e.geometry.shape[0] - 2)
        direction = e.geometry[k + 1] - e.geometry[k]
        axis = int(np.argmax(np.abs(direction)))
        r = np.inf
        for j, ej in enumerate(complex.edges):
            if j == i:
                continue
            d = linf_point_segment_distance(
                c[None, :], ej.geometry[:-1], ej.geometry[1:]
            ).min()
            r = min(r, d)
        for v in (e.geometry[0], e.geometry[-1]):
            r = min(r, float(np.max(np.abs(c - v))))
        if not np.isfinite(r):
            r = float(np.max(np.abs(e.geometry - c)))
        r = 0.25 * r if r > 0 else 0.25 * e.length
        centers.append(c)
        radii.append(r)
        axes.append(axis)
        ls.append(0.0)
        Ls.append(e.l1_length())

    centers = np.asarray(centers)
    radii = np.asarray(radii, dtype=float)

    def certified(i, r):
        e = complex.edges[i]
        _, merged = _edge_portion_in_cube(e, centers[i], r)
        if len(merged) != 1:
            return False
        s0, s1 = merged[0][0], merged[0][1]
        signs = set()
        for k in range(e.geometry.shape[0] - 1):
            a_s, b_s = e.cum_lengths[k], e.cum_lengths[k + 1]
            if b_s <= s0 or a_s >= s1:
                continue
            d_axis = e.geometry[k + 1, axes[i]] - e.geometry[k, axes[i]]
            if d_axis == 0:
                return False
            signs.add(1 if d_axis > 0 else -1)
        if len(signs) != 1:
            return False
        return _projection_measure(e, centers[i], r / 2.0, axes[i]) > 0

    for _ in range(200):
        changed = False
        # pairwise disjointness cap
        for i in range(len(radii)):
            for j in range(i + 1, len(radii)):
                gap = float(np.max(np.abs(centers[i] - centers[j])))
                if radii[i] + radii[j] > gap:
                    f = gap / (radii[i] + radii[j]) * (1 - 1e-12)
                    radii[i] *= f
                    radii[j] *= f
                    changed = True
        for i in range(len(radii)):
            guard = 0
            while not certified(i, radii[i]):
                radii[i] /= 2.0
                changed = True
                guard += 1
                if guard > 60 or radii[i] < 1e-15 * scale:
                    raise DegenerateGeometry(
                        "cannot certify a cube on edge %d" % i
                    )
        if not changed:
            break

    for i, e in enumerate(complex.edges):
        ls[i] = _projection_measure(e, centers[i], radii[i] / 2.0, axes[i])
    fam = CubeFamily(
        centers=centers,
        radii=radii,
        axes=np.asarray(axes),
        l=np.asarray(ls),
        big_l=np.asarray(Ls),
    )
    validate_cube_family(complex, fam)
    return fam


def n_bound_nd(complex: CurveComplex, cubes: CubeFamily | None = None):
    """The n-D finiteness bound and its certified cube family.

    Returns ``(0, None)`` for complexes with trivial first homology.  A
    supplied family is validated; otherwise one is constructed.
    """
    if betti1(complex) == 0:
        return 0, None
    if cubes is None:
        cubes = auto_cube_family(complex)
    else:
        validate_cube_family(complex, cubes)
    lo, hi = complex.bounding_box()
    d = float(max(hi - lo) / 2.0)
    n = complex.dim
    value = 2.0 * math.pi * n * cubes.big_l_max * d / (cubes.r_min * cubes.l_min)
    return int(math.floor(value)) + 1, cubes


# ---------------------------------------------------------------------------
# rational-relation search


@dataclass(frozen=True)
class QIndependenceResult:
    """Outcome of the heuristic integer-relation search.

    ``relation is None`` means no relation was found up to the stated height;
    this is evidence of rational independence, never a proof.
    """

    relation: tuple | None
    method: str
    height: int
    tol: float

    @property
    def independent(self) -> bool:
        return self.relation is None


def _normalize_relation(coeffs):
    coeffs = [int(c) for c in coeffs]
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    if g > 1:
        coeffs = [c // g for c in coeffs]
    for c in coeffs:
        if c != 0:
            if c < 0:
                coeffs = [-x for x in coeffs]
            break
    return tuple(coeffs)


def q_independence_check(values, precision_bits: int = 32, max_height: int = 10_000):
    """Search for an integer relation ``sum c_j v_j = 0`` within tolerance.

    Exhaustive (over a projected coefficient grid, auto-shrunk to keep the
    enumeration bounded) for up to four values; PSLQ above that.  The result
    is a heuristic certificate either way.
    """
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    m = v.shape[0]
    tol = 2.0 ** (-precision_bits) * max(1.0, float(np.abs(v).max(initial=0.0)))

    for i in range(m):
        if abs(v[i]) <= tol:
            rel = [0] * m
            rel[i] = 1
            return QIndependenceResult(tuple(rel), "direct", 1, tol)
    if m == 1:
        return QIndependenceResult(None, "direct", max_height, tol)

    if m <= 4:
        pivot = int(np.argmax(np.abs(v)))
        others = [i for i in range(m) if i != pivot]
        h = int(min(max_height, round(4e5 ** (1.0 / (m - 1)))))
        grids = np.meshgrid(*[np.arange(-h, h + 1) for _ in others], indexing="ij")
        coeff = np.stack([g.ravel() for g in grids], axis=1)
        partial = coeff @ v[others]
        cp = -np.round(partial / v[pivot])
        residual = np.abs(partial + cp * v[pivot])
        ok = (residual <= tol) & (np.abs(cp) <= h)
        ok &= (np.abs(coeff).sum(axis=1) + np.abs(cp)) > 0
        if np.any(ok):
            idx = int(np.argmin(np.where(ok, np.abs(coeff).sum(axis=1) + np.abs(cp), np.inf)))
            rel = np.zeros(m)
            rel[others] = coeff[idx]
            rel[pivot] = cp[idx]
            return QIndependenceResult(_normalize_relation(rel), "exhaustive", h, tol)
        return QIndependenceResult(None, "exhaustive", h, tol)

    import mpmath as mp

    # cap the searched height so that double-precision rounding noise of a
    # true relation stays well below the best spurious fit reachable in a
    # height-h box: h**m must stay far under 1/eps
    h = int(min(max_height, round(1e13 ** (1.0 / m))))
    with mp.workdps(40):
        found = mp.pslq([mp.mpf(x) for x in v], maxcoeff=h, maxsteps=10_000)
    if found is not None:
        residual = abs(float(np.dot(found, v)))
        gate = 64 * np.finfo(float).eps * (1.0 + np.abs(found).sum()) * max(
            1.0, float(np.abs(v).max())
        )
        if residual <= max(tol * 1e-3, gate):
            return QIndependenceResult(_normalize_relation(found), "pslq", h, tol)
    return QIndependenceResult(None, "pslq", h, tol)
