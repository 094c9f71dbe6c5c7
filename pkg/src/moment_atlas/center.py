"""Universal-center decisions for the coefficient-path ODE.

The equation ``dv/dt = sum_j f_j'(t) v^(j+1)`` is driven by a closed
piecewise-linear coefficient path starting at the origin.  The decision
combines word combinatorics (contractibility, homological triviality,
Eulerian covering), moment vanishing scans with the geometric bounds, and a
fixed-step fourth-order return-map integration used as numerical evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve_model import CurveComplex, EdgeWord, SampledPath, trace_path
from .errors import Blowup
from .moments import (
    MomentSpec,
    moment_quadrature,
    face_coefficients,
    vanishing_gate,
    vanishing_scan,
)
from .planar_geometry import extract_faces, n_bound_2d, n_bound_nd, q_independence_check
from .topology import (
    betti1,
    covers_trail,
    cycle_basis,
    euler_classify,
    homology_coefficients,
    reduce_word,
    word_support,
)


@dataclass(frozen=True)
class OdeSystem:
    """Coefficient path of the equation; closed and starting at the origin."""

    path: SampledPath

    def __post_init__(self):
        if not self.path.closed:
            raise ValueError("coefficient path must be closed")
        scale = max(self.path.bbox_diameter(), 1.0)
        if np.abs(self.path.points[0]).max() > 1e-9 * scale:
            raise ValueError("coefficient path must start at the origin")

    @property
    def dim(self) -> int:
        return self.path.dim


def _segment_slopes(path: SampledPath):
    dt = np.diff(path.times)
    return (path.segment_ends() - path.segment_starts()) / dt[:, None], dt


def _divergence_guard(slopes) -> float:
    per_coord = np.abs(slopes).max(axis=0)
    nonzero = per_coord[per_coord > 0]
    if nonzero.size == 0:
        return math.inf
    return 1.0 / float(nonzero.min())


def first_return_map(
    sys: OdeSystem | SampledPath, v0: float, steps_per_unit: int = 2**14
) -> float:
    """``v(b)`` for the solution starting at ``v0``: classical RK4, fixed
    step, aligned to the path's breakpoints (coefficients are constant on
    each segment).  Raises :class:`Blowup` past the divergence guard.

    Accepts a bare coefficient path as well, for open-path oracle checks."""
    path = sys.path if isinstance(sys, OdeSystem) else sys
    slopes, dt = _segment_slopes(path)
    guard = min(_divergence_guard(slopes), 1e12)
    v = float(v0)
    if abs(v) > guard:
        raise Blowup(v0)
    for s in range(slopes.shape[0]):
        c = slopes[s]
        # G(v) = v^2 * (c_1 + c_2 v + ... + c_n v^(n-1))
        coeffs = tuple(float(x) for x in c[::-1])
        n_steps = max(1, math.ceil(dt[s] * steps_per_unit))
        h = dt[s] / n_steps

        def g(v_):
            acc = 0.0
            for cj in coeffs:
                acc = acc * v_ + cj
            return acc * v_ * v_

        for _ in range(n_steps):
            k1 = g(v)
            k2 = g(v + 0.5 * h * k1)
            k3 = g(v + 0.5 * h * k2)
            k4 = g(v + h * k3)
            v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not math.isfinite(v) or abs(v) > guard:
                raise Blowup(v0)
    return v


def return_map_residuals(sys: OdeSystem, v0_values, steps_per_unit: int = 2**14):
    """(v0, |v(b) - v0|) pairs; halves a v0 that escapes, up to eight times."""
    out = []
    for v0 in v0_values:
        v = float(v0)
        for _ in range(9):
            try:
                out.append((v, abs(first_return_map(sys, v, steps_per_unit) - v)))
                break
            except Blowup:
                v /= 2.0
        else:
            out.append((v, math.inf))
    return tuple(out)


def fourth_coefficient(path: SampledPath) -> float:
    """``3 * integral(f1 f2') + 2 * integral(f2 f1')``.

    This combination is the first return map's leading nonlinear coefficient
    for planar systems; integration by parts over a closed path reduces it to
    ``integral(f1 f2')`` alone.
    """
    if path.dim != 2:
        raise ValueError("the coefficient formula is planar")
    m1 = moment_quadrature(path, MomentSpec(powers=(1, 0), i=2))
    m2 = moment_quadrature(path, MomentSpec(powers=(0, 1), i=1))
    return 3.0 * m1 + 2.0 * m2


@dataclass(frozen=True)
class CompositionFlags:
    """Word-level conditions: contractibility, trivial homology, covering."""

    contractible: bool
    homologically_trivial: bool
    covers: bool


def classify_conditions(
    word: EdgeWord,
    basis,
    complex: CurveComplex,
    trail: EdgeWord | None = None,
) -> CompositionFlags:
    """Flags from free reduction, homology, and the trail-covering test.

    With covering and trivial homology, contractibility follows; the direct
    free-reduction answer must agree, and a mismatch means a broken basis.
    """
    reduced = reduce_word(word, basis, complex)
    hom = homology_coefficients(word, basis, complex)
    trivial_h = not np.any(hom)
    covers = bool(trail is not None and covers_trail(word, trail, complex))
    contractible = len(reduced) == 0
    if covers and trivial_h and not contractible:
        raise AssertionError("covering word with trivial homology must reduce")
    return CompositionFlags(
        contractible=contractible,
        homologically_trivial=trivial_h,
        covers=covers,
    )


@dataclass(frozen=True)
class CenterVerdict:
    """Outcome of :func:`decide` with the evidence that produced it."""

    decision: str  # universal_center | not_center | undecided
    route: str
    m: int
    covers: bool
    contractible: bool | None = None
    homologically_trivial: bool | None = None
    q_independent: bool | None = None
    bound: int | None = None
    witness: MomentSpec | None = None
    witness_value: float | None = None
    residuals: tuple = ()
    notes: tuple = ()


@dataclass(frozen=True)
class DecideOptions:
    assume_q_independent: bool = False
    cubes: object = None
    tol: float | None = None
    v0_values: tuple = (0.01, -0.01, 0.05, -0.05)
    residual_gate: float = 1e-7
    steps_per_unit: int = 2**14
    scan_limit: int = 2_000_000
    check_return_map: bool = True
    seed: int = 0


def _word_covers_support(word: EdgeWord, complex: CurveComplex):
    """Covering test against the Eulerian trail of the word's own support."""
    if not word.letters:
        return True
    support, edge_map = word_support(word, complex)
    mapped = EdgeWord(tuple((edge_map[e], s) for e, s in word))
    cls = euler_classify(support)
    if cls.kind == "not_traversable":
        return False
    return covers_trail(mapped, cls.trail, support)


def decide(sys: OdeSystem, complex: CurveComplex, options: DecideOptions | None = None):
    """Decision tree for universal centers.

    Contractible complexes are immediate.  On planar complexes with
    rationally independent face areas (asserted or heuristically certified)
    the single lowest moment decides; otherwise a vanishing scan up to the
    geometric bound runs.  A moment witness refutes only when the path covers
    an Eulerian trail of its support; failing that, a nonzero return-map
    residual still refutes, and otherwise the verdict stays undecided.
    """
    opts = options or DecideOptions()
    path = sys.path
    word = trace_path(path, complex)
    m = betti1(complex)

    def residuals():
        if not opts.check_return_map:
            return ()
        return return_map_residuals(sys, opts.v0_values, opts.steps_per_unit)

    if m == 0:
        return CenterVerdict(
            decision="universal_center",
            route="tree",
            m=0,
            covers=True,
            contractible=True,
            homologically_trivial=True,
            residuals=residuals(),
            notes=("complex has no cycles; every closed path is contractible",),
        )

    basis = cycle_basis(complex, seed=opts.seed)
    covers = _word_covers_support(word, complex)
    flags = classify_conditions(word, basis, complex, trail=None)
    notes = []

    faceset = None
    q_independent = None
    if complex.dim == 2:
        faceset = extract_faces(complex)
        if opts.assume_q_independent:
            q_independent = True
            notes.append("face-area independence asserted by caller")
        else:
            q_independent = q_independence_check(
                [f.area for f in faceset.faces]
            ).independent
            notes.append("face-area independence is a heuristic certificate")

        if q_independent and covers:
            spec = MomentSpec(powers=(1, 0), i=2)
            value = moment_quadrature(path, spec)
            gate = vanishing_gate(path, 1, opts.tol, faceset.half_side)
            if abs(value) <= gate:
                return CenterVerdict(
                    decision="universal_center",
                    route="single_moment",
                    m=m,
                    covers=covers,
                    contractible=flags.contractible,
                    homologically_trivial=flags.homologically_trivial,
                    q_independent=q_independent,
                    witness=spec,
                    witness_value=value,
                    residuals=residuals(),
                    notes=tuple(notes),
                )
            return CenterVerdict(
                decision="not_center",
                route="single_moment",
                m=m,
                covers=covers,
                contractible=flags.contractible,
                homologically_trivial=flags.homologically_trivial,
                q_independent=q_independent,
                witness=spec,
                witness_value=value,
                residuals=residuals(),
                notes=tuple(notes),
            )

    if complex.dim == 2:
        bound = n_bound_2d(faceset)
        coeffs = face_coefficients(path, faceset)
        scan = vanishing_scan(
            path,
            bound,
            tol=opts.tol,
            faceset=faceset,
            face_coeffs=coeffs,
            limit=opts.scan_limit,
        )
        route = "planar_scan"
    else:
        bound, family = n_bound_nd(complex, opts.cubes)
        specs_count = (bound + 1) ** complex.dim * complex.dim
        if specs_count > opts.scan_limit:
            return CenterVerdict(
                decision="undecided",
                route="cube_scan",
                m=m,
                covers=covers,
                contractible=flags.contractible,
                homologically_trivial=flags.homologically_trivial,
                bound=bound,
                residuals=residuals(),
                notes=tuple(
                    notes
                    + [
                        "scan family of %d specs exceeds the practical limit %d"
                        % (specs_count, opts.scan_limit)
                    ]
                ),
            )
        scan = vanishing_scan(path, bound, tol=opts.tol, limit=opts.scan_limit)
        route = "cube_scan"

    if scan.all_zero:
        if covers or flags.contractible:
            return CenterVerdict(
                decision="universal_center",
                route=route,
                m=m,
                covers=covers,
                contractible=flags.contractible,
                homologically_trivial=flags.homologically_trivial,
                q_independent=q_independent,
                bound=bound,
                residuals=residuals(),
                notes=tuple(notes),
            )
        res = residuals()
        big = [r for r in res if r[1] > opts.residual_gate]
        if big:
            return CenterVerdict(
                decision="not_center",
                route=route,
                m=m,
                covers=covers,
                contractible=flags.contractible,
                homologically_trivial=flags.homologically_trivial,
                q_independent=q_independent,
                bound=bound,
                residuals=res,
                notes=tuple(
                    notes + ["moments vanish but the return map moves an orbit"]
                ),
            )
        return CenterVerdict(
            decision="undecided",
            route=route,
            m=m,
            covers=covers,
            contractible=flags.contractible,
            homologically_trivial=flags.homologically_trivial,
            q_independent=q_independent,
            bound=bound,
            residuals=res,
            notes=tuple(
                notes
                + [
                    "homologically trivial but not contractible and no Eulerian "
                    "cover: not a universal center, center status undecided"
                ]
            ),
        )

    if covers:
        return CenterVerdict(
            decision="not_center",
            route=route,
            m=m,
            covers=covers,
            contractible=flags.contractible,
            homologically_trivial=flags.homologically_trivial,
            q_independent=q_independent,
            bound=bound,
            witness=scan.witness,
            witness_value=scan.value,
            residuals=residuals(),
            notes=tuple(notes),
        )
    res = residuals()
    big = [r for r in res if r[1] > opts.residual_gate]
    if big:
        return CenterVerdict(
            decision="not_center",
            route=route,
            m=m,
            covers=covers,
            contractible=flags.contractible,
            homologically_trivial=flags.homologically_trivial,
            q_independent=q_independent,
            bound=bound,
            witness=scan.witness,
            witness_value=scan.value,
            residuals=res,
            notes=tuple(notes + ["return-map residual confirms the witness"]),
        )
    return CenterVerdict(
        decision="undecided",
        route=route,
        m=m,
        covers=covers,
        contractible=flags.contractible,
        homologically_trivial=flags.homologically_trivial,
        q_independent=q_independent,
        bound=bound,
        witness=scan.witness,
        witness_value=scan.value,
        residuals=res,
        notes=tuple(
            notes
            + ["moment witness found but the Eulerian-cover hypothesis fails"]
        ),
    )
