"""The acceptance checks, runnable from the test suite or `selftest`.

Each criterion function returns a :class:`CriterionResult`; nothing here is
mocked or loosened: tolerances and expected values are pinned in the bodies.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import approx as apx
from .center import OdeSystem, first_return_map
from .curve_model import CurveComplex, EdgeWord, SampledPath, realize
from .fixtures import (
    cube_grid_complex,
    cube_grid_family,
    figure_eight_complex,
    grid_complex,
    square_path,
    universal_center_path,
)
from .moments import (
    MomentSpec,
    MonomialTable,
    face_coefficients,
    moment_quadrature,
    moment_via_homology,
    moments_quadrature,
    monomial_face_integral,
    theorem_index_family,
)
from .planar_geometry import extract_faces, n_bound_2d, n_bound_nd
from .projection import expansion_check, sample_direction
from .topology import (
    betti1,
    covers_trail,
    cycle_basis,
    euler_classify,
    homology_coefficients,
    reduce_word,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    description: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return "ACCEPTANCE %2d [%s] %s — %s (%.2fs)" % (
            self.number,
            status,
            self.description,
            self.detail,
            self.elapsed,
        )


def _result(number, description, start, passed, detail):
    return CriterionResult(number, description, passed, detail, time.time() - start)


# ---------------------------------------------------------------------------
# word generators (seeded, deterministic)


def random_closed_words(complex: CurveComplex, count: int, seed: int, max_len=14):
    """Seeded closed walks on the complex, mixed with commutator-style words
    (products of basis-loop commutators) so homologically trivial cases occur.
    """
    rng = random.Random(seed)
    basis = cycle_basis(complex)
    words = []

    def random_walk():
        for _ in range(400):
            v0 = rng.randrange(complex.n_vertices)
            v = v0
            letters = []
            for _ in range(rng.randrange(3, max_len)):
                ei = rng.choice(complex.adjacency[v])
                e = complex.edges[ei]
                if e.is_loop:
                    letters.append((ei, rng.choice((1, -1))))
                    continue
                if e.v_from == v:
                    letters.append((ei, 1))
                    v = e.v_to
                else:
                    letters.append((ei, -1))
                    v = e.v_from
                if v == v0 and len(letters) >= 2 and rng.random() < 0.35:
                    return EdgeWord(tuple(letters))
            if v == v0 and letters:
                return EdgeWord(tuple(letters))
        raise RuntimeError("could not sample a closed walk")

    def commutator_word():
        a = basis.loops[rng.randrange(len(basis.loops))]
        b = basis.loops[rng.randrange(len(basis.loops))]
        return a * b * a.inverse() * b.inverse()

    for j in range(count):
        words.append(commutator_word() if j % 2 else random_walk())
    return words


def covering_words(complex: CurveComplex, count: int, seed: int, max_steps=16):
    """Seeded walks over the positions of the complex's Eulerian trail.

    Built to satisfy the covering condition by construction; a step forward
    across trail position p emits trail[p], a backward step its inverse.
    """
    cls = euler_classify(complex)
    if cls.kind != "unicursal":
        raise ValueError("covering-word generator expects a unicursal complex")
    trail = cls.trail.letters
    L = len(trail)
    verts = cls.trail.vertex_sequence(complex)
    rng = random.Random(seed)
    words = []
    while len(words) < count:
        p0 = rng.randrange(L)
        p = p0
        letters = []
        for _ in range(rng.randrange(2, max_steps)):
            step = rng.choice((1, -1))
            if step == 1:
                letters.append(trail[p])
                p = (p + 1) % L
            else:
                q = (p - 1) % L
                letters.append((trail[q][0], -trail[q][1]))
                p = q
        word = EdgeWord(tuple(letters))
        # closedness: the walk must return to a position with the same vertex
        if verts[p % L] == verts[p0 % L] and word.is_closed(complex) and letters:
            words.append(word)
    return words


# ---------------------------------------------------------------------------
# criteria


def criterion_1():
    """Grid bounds: N, m, r_j, A_j exact on the k x k fixtures."""
    start = time.time()
    expected_n = {1: 22, 2: 43, 3: 64, 4: 85}
    details = []
    for k in (1, 2, 3, 4):
        t0 = time.time()
        complex = grid_complex(k)
        faceset = extract_faces(complex, inscribed_eps=1e-9)
        n_val = n_bound_2d(faceset)
        elapsed = time.time() - t0
        ok = (
            n_val == expected_n[k]
            and faceset.m == k * k
            and all(abs(f.inscribed_side - 2.0 / k) <= 1e-9 for f in faceset.faces)
            and all(abs(f.area - 4.0 / k**2) <= 1e-9 for f in faceset.faces)
            and elapsed < 1.0
        )
        details.append("k=%d N=%d (%.2fs)" % (k, n_val, elapsed))
        if not ok:
            return _result(
                1,
                "grid bound",
                start,
                False,
                "k=%d: N=%d m=%d elapsed=%.2fs" % (k, n_val, faceset.m, elapsed),
            )
    return _result(1, "grid bound", start, True, ", ".join(details))


def criterion_2():
    """Cube-grid bounds with the hand family; m inside the strict bounds."""
    start = time.time()
    details = []
    for n, k in ((3, 1), (3, 2), (4, 1)):
        t0 = time.time()
        complex = cube_grid_complex(n, k)
        family = cube_grid_family(complex, k)
        n_val, _ = n_bound_nd(complex, family)
        m = betti1(complex)
        lower = n * (n - 1) * 2 ** (n - 3) * k**n / 2 ** (n - 2)
        upper = n * (n - 1) * 2 ** (n - 3) * (k + 2) ** n / 2 ** (n - 2)
        elapsed = time.time() - t0
        expected = math.floor(32 * math.pi * n * k) + 1
        ok = n_val == expected and lower < m < upper and elapsed < 2.0
        details.append("n=%d k=%d N=%d m=%d (%.2fs)" % (n, k, n_val, m, elapsed))
        if not ok:
            return _result(
                2,
                "cube-grid bound",
                start,
                False,
                "n=%d k=%d: N=%d expected %d, m=%d in (%g, %g)? elapsed=%.2fs"
                % (n, k, n_val, expected, m, lower, upper, elapsed),
            )
    return _result(2, "cube-grid bound", start, True, ", ".join(details))


def criterion_3():
    """Quadrature and face pipelines agree to 1e-9 relative, degree <= 8."""
    start = time.time()
    specs = [
        MomentSpec(powers=(d1, d2), i=i)
        for d1 in range(9)
        for d2 in range(9 - d1)
        for i in (1, 2)
    ]
    fixtures = [(grid_complex(2), 25, 11), (figure_eight_complex(), 25, 12)]
    worst = 0.0
    checked = 0
    for complex, count, seed in fixtures:
        faceset = extract_faces(complex)
        table = MonomialTable(faceset, 10)
        for word in random_closed_words(complex, count, seed):
            path = realize(word, complex)
            coeffs = face_coefficients(path, faceset)
            vq = moments_quadrature(path, specs)
            for spec, q in zip(specs, vq):
                h = moment_via_homology(faceset, coeffs, spec, table)
                gap = abs(q - h) / (1e-9 * (1.0 + abs(q)))
                worst = max(worst, gap)
                checked += 1
    elapsed = time.time() - start
    ok = worst <= 1.0 and elapsed < 30.0
    return _result(
        3,
        "pipeline equivalence",
        start,
        ok,
        "%d comparisons, worst gap %.3g of budget, %.1fs" % (checked, worst, elapsed),
    )


def criterion_4():
    """Packing inequality sqrt(m) <= 2 d / r < N on every fixture with m >= 1.

    The factor 2 makes the half-side and the full inscribed-square side
    commensurable; the grid fixtures realize it with equality.
    """
    start = time.time()
    details = []
    for name, complex in [
        ("grid1", grid_complex(1)),
        ("grid2", grid_complex(2)),
        ("grid3", grid_complex(3)),
        ("grid4", grid_complex(4)),
        ("figure_eight", figure_eight_complex()),
    ]:
        faceset = extract_faces(complex, inscribed_eps=1e-9)
        if faceset.m < 1:
            continue
        ratio = 2.0 * faceset.half_side / faceset.r_min
        n_val = n_bound_2d(faceset)
        if not (math.sqrt(faceset.m) <= ratio + 1e-9 and ratio < n_val):
            return _result(
                4,
                "packing inequality",
                start,
                False,
                "%s: sqrt(m)=%.6f ratio=%.6f N=%d"
                % (name, math.sqrt(faceset.m), ratio, n_val),
            )
        details.append("%s ok" % name)
    return _result(4, "packing inequality", start, True, ", ".join(details))


def criterion_5():
    """Family vanishing up to N implies all moments vanish up to N + 6."""
    start = time.time()
    fired = 0
    for complex, count, seed in [
        (grid_complex(1), 50, 21),
        (grid_complex(2), 50, 22),
        (figure_eight_complex(), 50, 23),
    ]:
        faceset = extract_faces(complex)
        bound = n_bound_2d(faceset)
        family = theorem_index_family(2, bound)
        extended = [
            MomentSpec(powers=(d1, d2), i=i)
            for d1 in range(bound + 7)
            for d2 in range(bound + 7 - d1)
            for i in (1, 2)
        ]
        table = MonomialTable(faceset, 2 * (bound + 8))
        for word in random_closed_words(complex, count, seed):
            path = realize(word, complex)
            coeffs = face_coefficients(path, faceset)
            family_zero = all(
                abs(moment_via_homology(faceset, coeffs, s, table)) <= 1e-9
                for s in family
            )
            if not family_zero:
                continue
            fired += 1
            for s in extended:
                value = moment_via_homology(faceset, coeffs, s, table)
                if abs(value) > 1e-9:
                    return _result(
                        5,
                        "degree sufficiency",
                        start,
                        False,
                        "family vanished but %s = %.3g" % (s, value),
                    )
    ok = fired > 0
    return _result(
        5,
        "degree sufficiency",
        start,
        ok,
        "implication exercised on %d words" % fired,
    )


def criterion_6():
    """Homological triviality == free-reduction triviality on covering words."""
    start = time.time()
    complex = figure_eight_complex()
    basis = cycle_basis(complex)
    cls = euler_classify(complex)
    words = covering_words(complex, 30, seed=31)
    trivial_cases = nontrivial_cases = 0
    for word in words:
        if not covers_trail(word, cls.trail, complex):
            return _result(6, "cover upgrade", start, False, "generator broke covering")
        hom_trivial = not np.any(homology_coefficients(word, basis, complex))
        red_trivial = len(reduce_word(word, basis, complex)) == 0
        if hom_trivial != red_trivial:
            return _result(
                6,
                "cover upgrade",
                start,
                False,
                "word %s: homology %s, reduction %s"
                % (word.letters, hom_trivial, red_trivial),
            )
        if hom_trivial:
            trivial_cases += 1
        else:
            nontrivial_cases += 1
    ok = trivial_cases > 0 and nontrivial_cases > 0
    return _result(
        6,
        "cover upgrade",
        start,
        ok,
        "30 words, %d trivial / %d nontrivial, 100%% agreement"
        % (trivial_cases, nontrivial_cases),
    )


def criterion_7():
    """Return-map soundness on the composition fixture and the square."""
    start = time.time()
    universal = OdeSystem(path=universal_center_path(64))
    worst_u = max(
        abs(first_return_map(universal, v0) - v0) for v0 in (0.01, -0.01, 0.05, -0.05)
    )
    square = OdeSystem(path=square_path())
    witness = moment_quadrature(square.path, MomentSpec(powers=(1, 0), i=2))
    best_sq = max(
        abs(first_return_map(square, v0) - v0)
        for v0 in (0.05, 0.08, 0.1, -0.08, -0.1)
    )
    elapsed = time.time() - start
    ok = (
        worst_u <= 1e-8
        and abs(witness - 1.0) < 1e-12
        and best_sq >= 1e-4
        and elapsed < 5.0
    )
    return _result(
        7,
        "center soundness",
        start,
        ok,
        "universal residual %.2e, square witness %.3f, square residual %.2e, %.1fs"
        % (worst_u, witness, best_sq, elapsed),
    )


def criterion_8():
    """Integration by parts: M1 + M2 = 0, so 3 M1 + 2 M2 reduces to M1."""
    start = time.time()
    rng = np.random.default_rng(8)
    worst_sum = worst_reduce = 0.0
    for _ in range(50):
        n_pts = int(rng.integers(4, 14))
        pts = np.vstack(
            [[0.0, 0.0], rng.uniform(-1, 1, size=(n_pts, 2)), [0.0, 0.0]]
        )
        path = SampledPath(
            times=np.arange(float(n_pts + 2)), points=pts, closed=True
        )
        m1 = moment_quadrature(path, MomentSpec(powers=(1, 0), i=2))
        m2 = moment_quadrature(path, MomentSpec(powers=(0, 1), i=1))
        worst_sum = max(worst_sum, abs(m1 + m2))
        worst_reduce = max(worst_reduce, abs((3 * m1 + 2 * m2) - m1))
    ok = worst_sum <= 1e-12 and worst_reduce <= 1e-12
    return _result(
        8,
        "parts identity",
        start,
        ok,
        "max |M1+M2| = %.2e, max |(3M1+2M2)-M1| = %.2e over 50 systems"
        % (worst_sum, worst_reduce),
    )


def criterion_9():
    """Operator structure: constants, axis commutation, |x| rate, monotone."""
    start = time.time()
    const = apx.approximate(lambda p: np.full(p.shape[0], 2.75), 2, 6)
    c = const.coefficients.copy()
    c[0, 0] -= 2.75
    const_dev = float(np.abs(c).max())

    def f2(p):
        return np.abs(p[:, 0]) + 0.5 * np.cos(2.0 * p[:, 1] + 0.3)

    k_c = 8
    M = 8 * k_c
    theta, x = apx._cosine_grid(M)
    grids = np.meshgrid(x, x, indexing="ij")
    vals = f2(np.stack([g.ravel() for g in grids], axis=1)).reshape(M, M)
    T = apx._axis_transform(k_c, M, theta)
    c_ab = np.tensordot(np.tensordot(vals, T, axes=([0], [0])), T, axes=([0], [0]))
    c_ba = np.tensordot(
        np.tensordot(vals.T, T, axes=([0], [0])), T, axes=([0], [0])
    ).T
    commute_dev = float(np.abs(c_ab - c_ba).max())

    f_abs = lambda p: np.abs(p[:, 0])
    errs = []
    for k in (4, 8, 16, 32):
        poly = apx.approximate(f_abs, 1, k, lipschitz=1.0)
        errs.append(apx.sup_error(f_abs, poly, 10001))
    rate_ok = all(e <= apx.C_OP * 1.0 / k for e, k in zip(errs, (4, 8, 16, 32)))
    monotone = all(a >= b for a, b in zip(errs, errs[1:]))

    ok = const_dev <= 1e-13 and commute_dev <= 1e-12 and rate_ok and monotone
    return _result(
        9,
        "operator structure",
        start,
        ok,
        "const dev %.1e, commute dev %.1e, k*err %s (C_OP=%.2f)"
        % (const_dev, commute_dev, [round(e * k, 3) for e, k in zip(errs, (4, 8, 16, 32))], apx.C_OP),
    )


def criterion_10():
    """Multinomial expansion identity at 1e-9 for d <= 6, n in {3, 4}."""
    start = time.time()
    rng = np.random.default_rng(10)
    checked = 0
    for n in (3, 4):
        for p_idx in range(10):
            n_pts = int(rng.integers(5, 12))
            pts = rng.uniform(-1, 1, size=(n_pts, n))
            pts = np.vstack([pts, pts[0]])
            path = SampledPath(
                times=np.arange(float(n_pts + 1)), points=pts, closed=True
            )
            for s in range(5):
                pair = sample_direction(1000 + 17 * p_idx + s, n)
                for d in range(7):
                    if not expansion_check(path, pair, d, tol=1e-9):
                        return _result(
                            10,
                            "expansion identity",
                            start,
                            False,
                            "failed at n=%d path=%d seed=%d d=%d"
                            % (n, p_idx, pair.seed, d),
                        )
                    checked += 1
    elapsed = time.time() - start
    ok = elapsed < 60.0
    return _result(
        10,
        "expansion identity",
        start,
        ok,
        "%d identities at 1e-9, %.1fs" % (checked, elapsed),
    )


def criterion_11():
    """Unit-square monomial integrals exact to 1e-13 for exponents <= 10."""
    start = time.time()
    loop = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
    worst = 0.0
    for a in range(11):
        for b in range(11):
            got = monomial_face_integral(loop, a, b)
            worst = max(worst, abs(got - 1.0 / ((a + 1) * (b + 1))))
    ok = worst <= 1e-13
    return _result(
        11, "exact polygon integrals", start, ok, "max error %.2e" % worst
    )


ALL_CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
]


def run_all(echo=print):
    """Run every criterion, echoing one line each; returns the results."""
    results = []
    for fn in ALL_CRITERIA:
        res = fn()
        results.append(res)
        if echo:
            echo(res.line())
    return results
