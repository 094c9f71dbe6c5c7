import math

import numpy as np
import pytest

from moment_atlas import (
    ConditionStarViolated,
    DegenerateGeometry,
    PointOnCurve,
    build_complex,
    extract_faces,
    n_bound_2d,
    n_bound_nd,
    q_independence_check,
    winding_number,
)
from moment_atlas.planar_geometry import (
    CubeFamily,
    auto_cube_family,
    inscribed_square_side_of_loops,
    linf_point_segment_distance,
    validate_cube_family,
)
from moment_atlas.fixtures import (
    cube_grid_complex,
    cube_grid_family,
    grid_complex,
    square_path,
    tree_complex,
)


def loop(points):
    pts = np.asarray(points, dtype=float)
    return np.vstack([pts, pts[:1]])


class TestExtractFaces:
    def test_single_square(self):
        c = build_complex([square_path()])
        fs = extract_faces(c)
        assert fs.m == 1
        assert fs.faces[0].area == pytest.approx(1.0, abs=1e-12)

    def test_figure_eight(self, figure_eight):
        fs = extract_faces(figure_eight)
        assert fs.m == 2
        areas = sorted(f.area for f in fs.faces)
        assert areas == pytest.approx([1.0, math.sqrt(2.0)], abs=1e-12)

    def test_grids(self):
        for k in (1, 2, 3):
            fs = extract_faces(grid_complex(k))
            assert fs.m == k * k
            for f in fs.faces:
                assert f.area == pytest.approx(4.0 / k**2, abs=1e-12)
            assert fs.total_area() == pytest.approx(4.0, rel=1e-12)

    def test_rep_points_interior(self, grid2):
        fs = extract_faces(grid2)
        for f in fs.faces:
            assert f.contains(f.rep_point)

def test_tree_faceset_empty():
    fs = extract_faces(tree_complex())
    assert fs.m == 0
    assert n_bound_2d(fs) == 0


class TestInscribedSquare:
    def test_rectangle(self):
        rect = loop([[0, 0], [3, 0], [3, 1], [0, 1]])
        r = inscribed_square_side_of_loops(rect, (), eps=1e-3)
        assert r <= 1.0 < r + 1e-3

    def test_right_triangle(self):
        tri = loop([[0, 0], [1, 0], [0, 1]])
        eps = 1e-3
        r = inscribed_square_side_of_loops(tri, (), eps=eps)
        assert r <= 0.5 < r + eps
        # brute-force grid-maximization oracle at a tenth of its tolerance
        oracle_tol = 1e-2
        xs = np.arange(0.0, 1.0, oracle_tol / 10)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        inside = (X + Y < 1) & (X > 0) & (Y > 0)
        pts = np.stack([X[inside], Y[inside]], axis=1)
        d = linf_point_segment_distance(pts, tri[:-1], tri[1:]).min(axis=1)
        assert abs(2 * d.max() - 0.5) < oracle_tol
        assert abs(r - 2 * d.max()) < oracle_tol

    def test_grid_faces(self):
        for k in (1, 2, 4):
            fs = extract_faces(grid_complex(k), inscribed_eps=1e-9)
            for f in fs.faces:
                assert f.inscribed_side <= 2.0 / k < f.inscribed_side + 1e-9

    def test_monotone_under_shrinking(self):
        eps = 1e-3
        big = loop([[0, 0], [2, 0], [2, 2], [0, 2]])
        small = loop([[0, 0], [2, 0], [2, 1.2], [0, 1.2]])  # cut by a half-plane
        r_big = inscribed_square_side_of_loops(big, (), eps=eps)
        r_small = inscribed_square_side_of_loops(small, (), eps=eps)
        assert r_small <= r_big + eps

    def test_empty_interior(self):
        sliver = loop([[0, 0], [1, 0], [2, 0]])
        with pytest.raises(DegenerateGeometry):
            inscribed_square_side_of_loops(sliver, (), eps=1e-3)


class TestBound2d:
    def test_grid_values(self):
        expected = {1: 22, 2: 43, 3: 64, 4: 85}
        for k, n_val in expected.items():
            fs = extract_faces(grid_complex(k), inscribed_eps=1e-9)
            assert n_bound_2d(fs) == n_val

    def test_packing_inequality(self, figure_eight):
        for complex in (grid_complex(1), grid_complex(3), figure_eight):
            fs = extract_faces(complex, inscribed_eps=1e-9)
            ratio = 2.0 * fs.half_side / fs.r_min
            assert math.sqrt(fs.m) <= ratio + 1e-9
            assert ratio < n_bound_2d(fs)


class TestWinding:
    def test_values(self):
        sq = square_path()
        assert winding_number(sq, (0.5, 0.5)) == 1
        assert winding_number(sq, (5.0, 5.0)) == 0

    def test_doubled_loop(self):
        pts = np.array(
            [
                [0.0, 0.0],
                [1.0, 0.0],
                [1.0, 1.0],
                [0.0, 1.0],
                [0.0, 0.0],
                [1.0, 0.0],
                [1.0, 1.0],
                [0.0, 1.0],
                [0.0, 0.0],
            ]
        )
        from moment_atlas import SampledPath

        doubled = SampledPath(times=np.arange(9.0), points=pts, closed=True)
        assert winding_number(doubled, (0.5, 0.5)) == 2

    def test_point_on_curve(self):
        with pytest.raises(PointOnCurve):
            winding_number(square_path(), (0.5, 0.0))


class TestCubeBound:
    def test_hand_family_values(self):
        for n, k, expected in ((3, 1, 302), (3, 2, 604), (4, 1, 403)):
            complex = cube_grid_complex(n, k)
            family = cube_grid_family(complex, k)
            n_val, fam = n_bound_nd(complex, family)
            assert n_val == expected
            assert fam.size == complex.n_edges

    def test_tree_is_zero(self):
        n_val, fam = n_bound_nd(tree_complex(), None)
        assert n_val == 0 and fam is None

    def test_auto_family_certifies(self):
        complex = cube_grid_complex(3, 1)
        fam = auto_cube_family(complex)
        validate_cube_family(complex, fam)
        n_val, _ = n_bound_nd(complex, fam)
        assert n_val > 0

    def test_oversized_radius_rejected(self):
        complex = cube_grid_complex(3, 1)
        fam = cube_grid_family(complex, 1)
        bad = CubeFamily(
            centers=fam.centers,
            radii=fam.radii * 3.0,
            axes=fam.axes,
            l=fam.l,
            big_l=fam.big_l,
        )
        with pytest.raises(ConditionStarViolated) as exc:
            validate_cube_family(complex, bad)
        assert exc.value.clause in ("other_edge", "disjoint")

    def test_wrong_axis_rejected(self):
        complex = cube_grid_complex(3, 1)
        fam = cube_grid_family(complex, 1)
        bad = CubeFamily(
            centers=fam.centers,
            radii=fam.radii,
            axes=(fam.axes + 1) % 3,
            l=fam.l,
            big_l=fam.big_l,
        )
        with pytest.raises(ConditionStarViolated) as exc:
            validate_cube_family(complex, bad)
        assert exc.value.clause == "injective"

    def test_overstated_measure_rejected(self):
        complex = cube_grid_complex(3, 1)
        fam = cube_grid_family(complex, 1)
        bad = CubeFamily(
            centers=fam.centers,
            radii=fam.radii,
            axes=fam.axes,
            l=fam.l * 10.0,
            big_l=fam.big_l,
        )
        with pytest.raises(ConditionStarViolated) as exc:
            validate_cube_family(complex, bad)
        assert exc.value.clause == "measure"


class TestQIndependence:
    def test_irrational_pair_clear(self):
        res = q_independence_check([1.0, math.sqrt(2.0)])
        assert res.relation is None
        assert res.height >= 10_000 or res.method == "exhaustive"

    def test_small_relations(self):
        assert q_independence_check([1.0, 2.0]).relation == (2, -1)
        assert q_independence_check([1.0, 1.0 / 3.0]).relation == (1, -3)

    def test_exhaustive_matches_brute_force(self):
        # oracle: full double loop over a small box
        values = [1.0, math.sqrt(2.0)]
        H = 300
        tol = 2.0 ** (-32) * math.sqrt(2.0)
        found = None
        for c1 in range(-H, H + 1):
            for c2 in range(-H, H + 1):
                if (c1 or c2) and abs(c1 * values[0] + c2 * values[1]) <= tol:
                    found = (c1, c2)
        assert found is None
        assert q_independence_check(values, max_height=H).relation is None

    def test_triple_relation(self):
        assert q_independence_check([1.0, 1.0, 2.0]).relation is not None

    def test_pslq_branch(self):
        rel = q_independence_check(
            [1.0, math.sqrt(2.0), 3.0 - 2.0 * math.sqrt(2.0), math.pi, math.e]
        ).relation
        assert rel == (3, -2, -1, 0, 0)
        res = q_independence_check(
            [1.0, math.sqrt(2.0), math.pi, math.e, math.sqrt(3.0)]
        )
        assert res.relation is None

    def test_zero_value_is_dependent(self):
        assert q_independence_check([0.0, 1.5]).relation == (1, 0)
