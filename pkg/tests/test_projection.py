import numpy as np
import pytest

from moment_atlas import (
    DegreeTooLarge,
    DirectionPair,
    MomentSpec,
    SampledPath,
    expansion_check,
    moment_quadrature,
    project,
    restricted_moment,
    sample_direction,
)


def random_closed_path(n, n_pts, seed):
    gen = np.random.default_rng(seed)
    pts = gen.uniform(-1, 1, size=(n_pts, n))
    pts = np.vstack([pts, pts[0]])
    return SampledPath(times=np.arange(float(n_pts + 1)), points=pts, closed=True)


def square_in_3d():
    pts = np.array(
        [
            [0.0, 0.0, 0.3],
            [1.0, 0.0, 0.3],
            [1.0, 1.0, 0.3],
            [0.0, 1.0, 0.3],
            [0.0, 0.0, 0.3],
        ]
    )
    return SampledPath(times=np.arange(5.0), points=pts, closed=True)


class TestDirectionPair:
    def test_validation(self):
        with pytest.raises(ValueError):
            DirectionPair(v1=np.zeros(3), v2=np.ones(3))
        with pytest.raises(ValueError):
            DirectionPair(v1=np.ones(3), v2=2.0 * np.ones(3))

    def test_sampling_is_seeded(self):
        a = sample_direction(7, 4)
        b = sample_direction(7, 4)
        assert np.array_equal(a.v1, b.v1) and np.array_equal(a.v2, b.v2)
        c = sample_direction(8, 4)
        assert not np.array_equal(a.v1, c.v1)
        assert np.abs(a.v1).max() <= 1.0 and np.abs(a.v2).max() <= 1.0


class TestProject:
    def test_coordinate_projection(self):
        p = square_in_3d()
        pair = DirectionPair(
            v1=np.array([1.0, 0.0, 0.0]), v2=np.array([0.0, 1.0, 0.0])
        )
        q = project(p, pair)
        assert q.dim == 2 and q.closed
        assert np.array_equal(q.points, p.points[:, :2])

    def test_constant_path(self):
        pts = np.tile([0.2, -0.4, 0.6], (3, 1))
        p = SampledPath(times=np.arange(3.0), points=pts, closed=True)
        pair = sample_direction(1, 3)
        q = project(p, pair)
        assert np.ptp(q.points, axis=0).max() == 0.0

    def test_linearity(self):
        p = random_closed_path(3, 8, seed=2)
        pair = sample_direction(3, 3)
        double = DirectionPair(v1=2.0 * pair.v1, v2=2.0 * pair.v2)
        assert np.allclose(project(p, double).points, 2.0 * project(p, pair).points)


class TestRestrictedMoment:
    def test_closed_first_component_zero(self):
        p = random_closed_path(3, 9, seed=4)
        q = project(p, sample_direction(5, 3))
        first, _ = restricted_moment(q, 3)
        assert first == pytest.approx(0.0, abs=1e-13)

    def test_degree_zero_second_component(self):
        p = random_closed_path(4, 7, seed=6)
        q = project(p, sample_direction(6, 4))
        _, second = restricted_moment(q, 0)
        assert second == pytest.approx(0.0, abs=1e-13)

    def test_projected_square_area(self):
        q = project(
            square_in_3d(),
            DirectionPair(v1=np.array([1.0, 0.0, 0.0]), v2=np.array([0.0, 1.0, 0.0])),
        )
        _, second = restricted_moment(q, 1)
        assert second == pytest.approx(1.0, abs=1e-13)


class TestExpansion:
    def test_identity_over_degrees(self):
        for n in (3, 4):
            p = random_closed_path(n, 9, seed=10 + n)
            for s in range(3):
                pair = sample_direction(100 + s, n)
                for d in range(7):
                    assert expansion_check(p, pair, d, tol=1e-9)

    def test_guard(self):
        p = random_closed_path(3, 6, seed=1)
        with pytest.raises(DegreeTooLarge):
            expansion_check(p, sample_direction(0, 3), 13, tol=1e-9)

    def test_detects_wrong_identity(self):
        # corrupting one direction coordinate must break the identity
        p = random_closed_path(3, 9, seed=3)
        pair = sample_direction(11, 3)
        lhs_pair = DirectionPair(v1=pair.v1.copy(), v2=pair.v2 * 1.01)
        lhs = moment_quadrature(project(p, lhs_pair), MomentSpec((2, 0), 2))
        rhs = moment_quadrature(project(p, pair), MomentSpec((2, 0), 2))
        assert abs(lhs - rhs) > 1e-9


class TestVanishingTransfer:
    def test_tree_supported_path_has_zero_restrictions(self):
        # out-and-back in R^3: every moment vanishes, so does every
        # projected restricted moment, for any direction pair
        pts = np.array(
            [
                [0.0, 0.0, 0.0],
                [0.5, 0.2, -0.3],
                [0.9, -0.1, 0.4],
                [0.5, 0.2, -0.3],
                [0.0, 0.0, 0.0],
            ]
        )
        p = SampledPath(times=np.arange(5.0), points=pts, closed=True)
        for s in range(20):
            q = project(p, sample_direction(s, 3))
            for d in range(5):
                first, second = restricted_moment(q, d)
                assert abs(first) < 1e-12 and abs(second) < 1e-12

    def test_nonvanishing_transfers_generically(self):
        p = square_in_3d()
        hits = 0
        for s in range(20):
            q = project(p, sample_direction(s, 3))
            _, second = restricted_moment(q, 1)
            if abs(second) > 1e-8:
                hits += 1
        assert hits >= 19
