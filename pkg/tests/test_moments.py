import math

import numpy as np
import pytest

from moment_atlas import (
    EdgeWord,
    MomentSpec,
    SampledPath,
    extract_faces,
    face_coefficients,
    iterated_integral,
    moment_quadrature,
    moment_report,
    moment_via_homology,
    monomial_face_integral,
    realize,
    vanishing_scan,
)
from moment_atlas.moments import (
    MonomialTable,
    moments_quadrature,
    theorem_index_family,
    vanishing_gate,
)
from moment_atlas.fixtures import circle_path, commutator_path, square_path
from conftest import closed_walk


class TestMomentQuadrature:
    def test_degree_zero_closed(self):
        sq = square_path()
        for i in (1, 2):
            assert moment_quadrature(sq, MomentSpec((0, 0), i)) == pytest.approx(
                0.0, abs=1e-15
            )

    def test_square_area(self):
        assert moment_quadrature(square_path(), MomentSpec((1, 0), 2)) == 1.0

    def test_circle_area_convergence(self):
        # dense-sampling oracle: the 2^16-segment value pins the limit
        coarse = moment_quadrature(circle_path(512), MomentSpec((1, 0), 2))
        dense = moment_quadrature(circle_path(2**16), MomentSpec((1, 0), 2))
        assert abs(dense - math.pi) < 1e-8
        assert abs(coarse - math.pi) < 1e-4

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            MomentSpec((1, -1), 2)
        with pytest.raises(ValueError):
            MomentSpec((1, 0), 3)
        with pytest.raises(ValueError):
            moment_quadrature(square_path(), MomentSpec((1, 0, 0), 3))

    def test_batch_matches_single(self, rng):
        sq = square_path()
        specs = [MomentSpec((d1, d2), i) for d1 in range(3) for d2 in range(3) for i in (1, 2)]
        batch = moments_quadrature(sq, specs)
        for spec, value in zip(specs, batch):
            assert value == pytest.approx(moment_quadrature(sq, spec), abs=1e-14)


class TestIteratedIntegral:
    def test_single_index_closed(self):
        assert iterated_integral(square_path(), (1,)) == pytest.approx(0.0, abs=1e-15)

    def test_repeated_index_closed(self):
        assert iterated_integral(square_path(), (1, 1)) == pytest.approx(
            0.0, abs=1e-14
        )

    def test_signed_area_against_riemann_oracle(self):
        sq = square_path()
        got = iterated_integral(sq, (1, 2))
        assert got == pytest.approx(1.0, abs=1e-12)
        # brute-force Riemann sum over the triangle t1 <= t2
        n = 1200
        ts = np.linspace(sq.times[0], sq.times[-1], n + 1)
        mid = (ts[:-1] + ts[1:]) / 2.0
        dt = ts[1] - ts[0]
        f1 = np.interp(mid, sq.times, sq.points[:, 0])
        d2 = np.diff(np.interp(ts, sq.times, sq.points[:, 1])) / dt
        inner = np.cumsum(np.diff(np.interp(ts, sq.times, sq.points[:, 0])))
        oracle = float(np.sum(d2 * (inner - np.diff(np.interp(ts, sq.times, sq.points[:, 0])) / 2.0) * dt))
        assert abs(got - oracle) < 5e-3

    def test_matches_moment_for_order_two(self, rng):
        # integral of (f1 - f1(a)) df2 equals the first moment for closed paths
        pts = np.vstack([np.zeros((1, 2)), np.random.default_rng(5).uniform(-1, 1, (6, 2)), np.zeros((1, 2))])
        p = SampledPath(times=np.arange(8.0), points=pts, closed=True)
        assert iterated_integral(p, (1, 2)) == pytest.approx(
            moment_quadrature(p, MomentSpec((1, 0), 2)), abs=1e-13
        )

    def test_index_validation(self):
        with pytest.raises(ValueError):
            iterated_integral(square_path(), ())
        with pytest.raises(ValueError):
            iterated_integral(square_path(), (3,))


class TestMonomialFaceIntegral:
    def test_unit_square_closed_form(self):
        loop = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
        for a, b in ((0, 0), (1, 0), (2, 3), (10, 10)):
            assert monomial_face_integral(loop, a, b) == pytest.approx(
                1.0 / ((a + 1) * (b + 1)), abs=1e-14
            )

    def test_with_hole(self):
        outer = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [0.0, 0.0]])
        hole = np.array(
            [[0.5, 0.5], [0.5, 1.5], [1.5, 1.5], [1.5, 0.5], [0.5, 0.5]]
        )  # clockwise
        from moment_atlas.planar_geometry import Face

        face = Face(
            outer=outer,
            holes=(hole,),
            area=3.0,
            rep_point=np.array([0.25, 0.25]),
            inscribed_side=0.5,
        )
        assert monomial_face_integral(face, 0, 0) == pytest.approx(3.0, abs=1e-13)

    def test_negative_exponent_rejected(self):
        loop = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            monomial_face_integral(loop, -1, 0)


class TestFacePipeline:
    def test_unit_square_face(self):
        complex_ = __import__("moment_atlas").build_complex([square_path()])
        fs = extract_faces(complex_)
        assert moment_via_homology(fs, [1], MomentSpec((1, 0), 2)) == pytest.approx(
            1.0, abs=1e-14
        )
        assert moment_via_homology(fs, [0], MomentSpec((1, 0), 2)) == 0.0
        # the derivative coordinate's partner exponent kills the integrand
        assert moment_via_homology(fs, [1], MomentSpec((0, 3), 2)) == 0.0

    def test_face_coefficients_signs(self, figure_eight):
        fs = extract_faces(figure_eight)
        w = EdgeWord(((0, 1),))
        p = realize(w, figure_eight)
        coeffs = face_coefficients(p, fs)
        assert sorted(coeffs.tolist()) == [-1, 0] or sorted(coeffs.tolist()) == [0, 1]
        back = face_coefficients(realize(w.inverse(), figure_eight), fs)
        assert np.array_equal(back, -coeffs)

    def test_commutator_coefficients_vanish(self, figure_eight):
        fs = extract_faces(figure_eight)
        assert face_coefficients(commutator_path(), fs).tolist() == [0, 0]

    def test_double_lobe_combination(self, figure_eight):
        fs = extract_faces(figure_eight)
        w = EdgeWord(((0, 1), (0, 1), (1, -1)))
        p = realize(w, figure_eight)
        coeffs = face_coefficients(p, fs)
        vq = moment_quadrature(p, MomentSpec((1, 0), 2))
        vh = moment_via_homology(fs, coeffs, MomentSpec((1, 0), 2))
        assert vq == pytest.approx(vh, abs=1e-12)

    def test_agreement_random_words(self, grid2, figure_eight, rng):
        specs = [
            MomentSpec((d1, d2), i)
            for d1 in range(9)
            for d2 in range(9 - d1)
            for i in (1, 2)
        ]
        for complex_ in (grid2, figure_eight):
            fs = extract_faces(complex_)
            table = MonomialTable(fs, 10)
            for _ in range(8):
                w = closed_walk(complex_, rng)
                p = realize(w, complex_)
                coeffs = face_coefficients(p, fs)
                vq = moments_quadrature(p, specs)
                for spec, q in zip(specs, vq):
                    h = moment_via_homology(fs, coeffs, spec, table)
                    assert abs(q - h) <= 1e-9 * (1.0 + abs(q))

    def test_moments_depend_only_on_face_coefficients(self, figure_eight):
        # a b and b a share homology; their moments must coincide
        fs = extract_faces(figure_eight)
        p1 = realize(EdgeWord(((0, 1), (1, 1))), figure_eight)
        p2 = realize(EdgeWord(((1, 1), (0, 1))), figure_eight)
        for d1 in range(4):
            for d2 in range(3):
                for i in (1, 2):
                    spec = MomentSpec((d1, d2), i)
                    assert moment_quadrature(p1, spec) == pytest.approx(
                        moment_quadrature(p2, spec), abs=1e-9
                    )

    def test_integration_by_parts(self, rng):
        gen = np.random.default_rng(17)
        for _ in range(20):
            pts = np.vstack([np.zeros((1, 2)), gen.uniform(-1, 1, (7, 2)), np.zeros((1, 2))])
            p = SampledPath(times=np.arange(9.0), points=pts, closed=True)
            m1 = moment_quadrature(p, MomentSpec((1, 0), 2))
            m2 = moment_quadrature(p, MomentSpec((0, 1), 1))
            assert abs(m1 + m2) < 1e-12


class TestVanishingScan:
    def test_constant_path_all_zero(self):
        v = np.zeros((2, 2))
        p = SampledPath(times=np.array([0.0, 1.0]), points=v, closed=True)
        assert vanishing_scan(p, 3, tol=1e-9).all_zero

    def test_square_witness(self):
        result = vanishing_scan(square_path(), 2, tol=1e-9)
        assert not result.all_zero
        assert result.witness == MomentSpec((1, 0), 2)
        assert result.value == pytest.approx(1.0)

    def test_contractible_word_all_zero(self, grid2, rng):
        from moment_atlas import cycle_basis

        basis = cycle_basis(grid2)
        loop = basis.loops[0]
        w = loop * loop.inverse()
        p = realize(w, grid2)
        fs = extract_faces(grid2)
        assert vanishing_scan(p, 8, tol=1e-9, faceset=fs).all_zero

    def test_family_shape(self):
        fam = theorem_index_family(2, 3)
        assert all(s.i == 2 for s in fam)
        assert max(s.powers[0] for s in fam) == 4
        assert max(s.powers[1] for s in fam) == 3
        fam3 = theorem_index_family(3, 1)
        assert len(fam3) == (2**3) * 3

    def test_zero_moment_plus_independence_forces_all_zero(self, figure_eight):
        # lobe areas are rationally independent: a vanishing first moment
        # means zero face coefficients, hence a fully vanishing scan
        fs = extract_faces(figure_eight)
        p = commutator_path()
        assert moment_quadrature(p, MomentSpec((1, 0), 2)) == pytest.approx(
            0.0, abs=1e-12
        )
        assert face_coefficients(p, fs).tolist() == [0, 0]
        assert vanishing_scan(p, 8, tol=1e-9, faceset=fs).all_zero

    def test_gate_scaling(self):
        sq = square_path()
        assert vanishing_gate(sq, 0, None) == pytest.approx(1e-9 * 4.0)
        assert vanishing_gate(sq, 5, 1e-7) == 1e-7


def test_moment_report_round(figure_eight):
    fs = extract_faces(figure_eight)
    p = realize(EdgeWord(((0, 1),)), figure_eight)
    rep = moment_report(p, MomentSpec((1, 0), 2), fs)
    assert rep.agreement == pytest.approx(0.0, abs=1e-12)
    rep2 = moment_report(p, MomentSpec((1, 0), 2), None)
    assert rep2.value_homology is None and rep2.agreement is None
