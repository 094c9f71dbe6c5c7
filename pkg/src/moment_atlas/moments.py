"""Path moments by quadrature and by the face-decomposition pipeline.

A moment is ``integral of f1^d1 * ... * fn^dn * fi' dt`` along a path.  For
closed planar paths the same number equals a signed sum of exact monomial
integrals over the bounded faces, weighted by the path's winding numbers;
:func:`moment_report` runs both pipelines and reports their agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .curve_model import SampledPath
from .errors import NotClosed, PointOnCurve
from .planar_geometry import Face, FaceSet, winding_number


@dataclass(frozen=True)
class MomentSpec:
    """Exponent vector plus the 1-based coordinate whose derivative appears."""

    powers: tuple
    i: int

    def __post_init__(self):
        powers = tuple(int(d) for d in self.powers)
        if any(d < 0 for d in powers):
            raise ValueError("exponents must be non-negative")
        if not (1 <= self.i <= len(powers)):
            raise ValueError("derivative index out of range")
        object.__setattr__(self, "powers", powers)

    @property
    def dim(self) -> int:
        return len(self.powers)

    @property
    def degree(self) -> int:
        return sum(self.powers)

    def sort_key(self):
        return (self.powers, self.i)


@dataclass(frozen=True)
class MomentReport:
    spec: MomentSpec
    value_quadrature: float
    value_homology: float | None = None

    @property
    def agreement(self) -> float | None:
        if self.value_homology is None:
            return None
        return abs(self.value_quadrature - self.value_homology)


# ---------------------------------------------------------------------------
# quadrature pipeline


class _PathQuadrature:
    """Gauss-Legendre data shared by every moment of one path.

    Per segment the integrand is a polynomial of degree at most the moment
    degree, so ``ceil((degree + 2) / 2)`` nodes integrate it exactly up to
    rounding.
    """

    def __init__(self, path: SampledPath, max_degree: int):
        nodes = max(1, math.ceil((max_degree + 2) / 2))
        x, w = np.polynomial.legendre.leggauss(nodes)
        t0 = path.times[:-1]
        dt = np.diff(path.times)
        p0 = path.segment_starts()
        dp = path.segment_ends() - p0
        # values at nodes: (segments, nodes, dim)
        tau = 0.5 * (x + 1.0)
        self.values = p0[:, None, :] + tau[None, :, None] * dp[:, None, :]
        self.slopes = dp / dt[:, None]  # (segments, dim)
        self.weights = 0.5 * w[None, :] * dt[:, None]  # (segments, nodes)
        self._pow_cache = {}
        self.max_degree = max_degree

    def coord_power(self, c: int, d: int):
        key = (c, d)
        if key not in self._pow_cache:
            self._pow_cache[key] = self.values[:, :, c] ** d
        return self._pow_cache[key]

    def moment(self, spec: MomentSpec) -> float:
        prod_vals = self.weights * self.slopes[:, None, spec.i - 1]
        for c, d in enumerate(spec.powers):
            if d:
                prod_vals = prod_vals * self.coord_power(c, d)
        return float(prod_vals.sum())


def moment_quadrature(path: SampledPath, spec: MomentSpec) -> float:
    """Exact (up to rounding) moment of a PL path by per-segment quadrature."""
    if spec.dim != path.dim:
        raise ValueError("moment spec dimension does not match the path")
    return _PathQuadrature(path, spec.degree).moment(spec)


def moments_quadrature(path: SampledPath, specs) -> np.ndarray:
    """Batch quadrature sharing node evaluations across many specs."""
    specs = list(specs)
    if not specs:
        return np.zeros(0)
    max_degree = max(s.degree for s in specs)
    quad = _PathQuadrature(path, max_degree)
    return np.array([quad.moment(s) for s in specs])


def iterated_integral(path: SampledPath, indices) -> float:
    """Iterated integral of the path coordinate derivatives.

    ``indices`` are 1-based coordinates ``(i_1, ..., i_k)``; the innermost
    integration variable carries ``i_1``.  Computed by the cumulative scheme
    ``I_1(t) = f_{i_1}(t) - f_{i_1}(a)``, ``I_j(t) = integral of I_{j-1}
    df_{i_j}``, exactly per segment.
    """
    indices = [int(i) for i in indices]
    if not indices:
        raise ValueError("need at least one index")
    if any(not 1 <= i <= path.dim for i in indices):
        raise ValueError("index out of range")
    dt = np.diff(path.times)
    p0 = path.segment_starts()
    slopes = (path.segment_ends() - p0) / dt[:, None]
    S = len(dt)

    # polynomial coefficients of I_j on each segment in the local variable
    # tau in [0, dt_s]; I_1 = f_{i1}(t) - f_{i1}(a)
    c1 = indices[0] - 1
    coeffs = np.zeros((S, 2))
    coeffs[:, 0] = p0[:, c1] - path.points[0, c1]
    coeffs[:, 1] = slopes[:, c1]
    for idx in indices[1:]:
        c = idx - 1
        k = coeffs.shape[1]
        anti = coeffs / np.arange(1, k + 1)[None, :]  # drop constant, shift up
        inc = np.zeros((S, k + 1))
        inc[:, 1:] = anti * slopes[:, c : c + 1]
        # running value at segment starts
        seg_end = np.array(
            [np.polyval(inc[s, ::-1], dt[s]) for s in range(S)]
        )
        start_vals = np.concatenate([[0.0], np.cumsum(seg_end)])[:-1]
        inc[:, 0] = start_vals
        coeffs = inc
    return float(np.polyval(coeffs[-1, ::-1], dt[-1]))


# ---------------------------------------------------------------------------
# face pipeline


def _loop_monomial_flux(loop, a: int, b: int) -> float:
    """Contribution of one oriented boundary loop to the area integral of
    ``x^a y^b`` via the flux form ``x^(a+1) y^b / (a+1) dy``.

    Per segment the integrand is a polynomial of degree ``a + 1 + b``;
    Gauss-Legendre at that degree evaluates it exactly and stably (bounded
    point values, positive weights), unlike expanded binomial coefficients
    which cancel catastrophically at high degree.
    """
    nodes = (a + b + 3) // 2 + 1
    x, w = np.polynomial.legendre.leggauss(nodes)
    tau = 0.5 * (x + 1.0)
    x0 = loop[:-1, 0]
    y0 = loop[:-1, 1]
    dx = np.diff(loop[:, 0])
    dy = np.diff(loop[:, 1])
    X = x0[:, None] + tau[None, :] * dx[:, None]
    Y = y0[:, None] + tau[None, :] * dy[:, None]
    vals = (X ** (a + 1)) * (Y**b) @ (0.5 * w)
    return float(np.sum(vals * dy)) / (a + 1)


def monomial_face_integral(face, a: int, b: int) -> float:
    """Exact ``integral of x^a y^b`` over a polygon-with-holes face.

    ``face`` may be a :class:`Face` or a bare closed loop array (no holes);
    outer loops are counterclockwise, holes clockwise.
    """
    if a < 0 or b < 0:
        raise ValueError("exponents must be non-negative")
    if isinstance(face, Face):
        loops = [face.outer, *face.holes]
    else:
        loops = [np.asarray(face, dtype=float)]
    return float(sum(_loop_monomial_flux(loop, a, b) for loop in loops))


class MonomialTable:
    """Cached monomial integrals over the faces of one face set.

    Scans evaluate many moments against the same faces; this shares the
    quadrature geometry and coordinate power tables across exponents.
    """

    def __init__(self, faceset: FaceSet, max_total_degree: int):
        nodes = (max_total_degree + 4) // 2 + 1
        x, w = np.polynomial.legendre.leggauss(nodes)
        tau = 0.5 * (x + 1.0)
        self._w = 0.5 * w
        self._faces = []
        for face in faceset.faces:
            loops = [face.outer, *face.holes]
            x0 = np.concatenate([l[:-1, 0] for l in loops])
            y0 = np.concatenate([l[:-1, 1] for l in loops])
            dx = np.concatenate([np.diff(l[:, 0]) for l in loops])
            dy = np.concatenate([np.diff(l[:, 1]) for l in loops])
            X = x0[:, None] + tau[None, :] * dx[:, None]
            Y = y0[:, None] + tau[None, :] * dy[:, None]
            self._faces.append({"X": X, "Y": Y, "dy": dy, "xp": {}, "yp": {}})
        self._cache = {}

    def _power(self, data, key, e):
        store = data[key + "p"]
        if e not in store:
            store[e] = data[key.upper()] ** e
        return store[e]

    def integral(self, j: int, a: int, b: int) -> float:
        key = (j, a, b)
        if key not in self._cache:
            data = self._faces[j]
            vals = (
                self._power(data, "x", a + 1) * self._power(data, "y", b)
            ) @ self._w
            self._cache[key] = float(np.sum(vals * data["dy"])) / (a + 1)
        return self._cache[key]


def face_coefficients(path: SampledPath, faceset: FaceSet) -> np.ndarray:
    """Winding number of the closed path around each face's interior point."""
    if not path.closed:
        raise NotClosed("face coefficients require a closed path")
    out = np.zeros(faceset.m, dtype=int)
    for j, face in enumerate(faceset.faces):
        point = face.rep_point
        for attempt in range(8):
            try:
                out[j] = winding_number(path, point)
                break
            except PointOnCurve:
                # nudge toward the face centroid and retry
                centroid = face.outer[:-1].mean(axis=0)
                point = point + (centroid - point) * (0.5 ** (attempt + 1))
                if not face.contains(point):
                    continue
        else:
            raise PointOnCurve("no usable interior point for face %d" % j)
    return out


def moment_via_homology(
    faceset: FaceSet, face_coeffs, spec: MomentSpec, table: MonomialTable | None = None
) -> float:
    """Closed-path moment as a weighted sum of exact face integrals.

    For derivative coordinate ``i`` and the other coordinate ``k``, the
    boundary form pulls back to ``(-1)^i * d_k * x_k^(d_k - 1) * x_i^(d_i)``
    over each face; a zero ``d_k`` kills the integrand.
    """
    if spec.dim != 2:
        raise ValueError("the face pipeline is planar")
    coeffs = np.asarray(face_coeffs)
    if coeffs.shape[0] != faceset.m:
        raise ValueError("coefficient vector length does not match face count")
    i = spec.i
    k = 3 - i
    dk = spec.powers[k - 1]
    if dk == 0:
        return 0.0
    exps = [0, 0]
    exps[k - 1] = dk - 1
    exps[i - 1] = spec.powers[i - 1]
    sign = 1.0 if i == 2 else -1.0
    total = 0.0
    for j, (nj, face) in enumerate(zip(coeffs, faceset.faces)):
        if nj:
            if table is not None:
                total += nj * table.integral(j, exps[0], exps[1])
            else:
                total += nj * monomial_face_integral(face, exps[0], exps[1])
    return sign * dk * total


def moment_report(
    path: SampledPath, spec: MomentSpec, faceset: FaceSet | None = None
) -> MomentReport:
    """Both pipelines where available (planar closed paths), else quadrature."""
    vq = moment_quadrature(path, spec)
    vh = None
    if faceset is not None and path.dim == 2 and path.closed:
        vh = moment_via_homology(faceset, face_coefficients(path, faceset), spec)
    return MomentReport(spec=spec, value_quadrature=vq, value_homology=vh)


# ---------------------------------------------------------------------------
# vanishing scans


def theorem_index_family(dim: int, bound: int):
    """Moment specs whose vanishing settles all higher moments.

    Planar: derivative coordinate 2 only, ``max(d1 - 1, d2) <= bound``.
    Higher dimensions: every coordinate, ``max_j d_j <= bound``.
    Sorted lexicographically by (powers, i).
    """
    specs = []
    if dim == 2:
        for d1 in range(bound + 2):
            for d2 in range(bound + 1):
                specs.append(MomentSpec(powers=(d1, d2), i=2))
    else:
        for powers in product(range(bound + 1), repeat=dim):
            for i in range(1, dim + 1):
                specs.append(MomentSpec(powers=powers, i=i))
    specs.sort(key=lambda s: s.sort_key())
    return specs


def vanishing_gate(path: SampledPath, degree: int, tol: float | None, half_side=None):
    """Absolute gate for treating a float moment as zero.

    With ``tol=None`` the default 1e-9 is scaled by the path's l1 length times
    ``half_side**degree`` (floored at 1) to keep the gate meaningful across
    degrees; an explicit ``tol`` is used as-is.
    """
    if tol is not None:
        return tol
    scale = path.l1_length()
    if half_side is not None:
        scale *= half_side**degree
    return 1e-9 * max(1.0, scale)


@dataclass(frozen=True)
class ScanResult:
    all_zero: bool
    witness: MomentSpec | None = None
    value: float | None = None
    bound: int = 0
    checked: int = 0


def vanishing_scan(
    path: SampledPath,
    bound: int,
    tol: float | None = None,
    faceset: FaceSet | None = None,
    face_coeffs=None,
    limit: int | None = 2_000_000,
) -> ScanResult:
    """Scan the theorem index family up to ``bound`` for a nonzero moment.

    Uses the face pipeline when a face set is supplied (closed planar paths),
    quadrature otherwise.  Returns the lexicographically first witness above
    the gate, or ``all_zero``.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    specs = theorem_index_family(path.dim, bound)
    if limit is not None and len(specs) > limit:
        raise ValueError(
            "scan family has %d specs, over the limit %d" % (len(specs), limit)
        )

    use_faces = faceset is not None and path.dim == 2 and path.closed
    if use_faces and face_coeffs is None:
        face_coeffs = face_coefficients(path, faceset)

    if use_faces:
        half = faceset.half_side if faceset.m else None
        table = MonomialTable(faceset, bound * 2 + 2) if faceset.m else None
        for spec in specs:
            gate = vanishing_gate(path, spec.degree, tol, half)
            value = moment_via_homology(faceset, face_coeffs, spec, table)
            if abs(value) > gate:
                return ScanResult(False, spec, value, bound, len(specs))
        return ScanResult(True, None, None, bound, len(specs))

    quad = _PathQuadrature(path, max(s.degree for s in specs))
    for spec in specs:
        gate = vanishing_gate(path, spec.degree, tol)
        value = quad.moment(spec)
        if abs(value) > gate:
            return ScanResult(False, spec, value, bound, len(specs))
    return ScanResult(True, None, None, bound, len(specs))
