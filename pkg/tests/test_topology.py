from collections import Counter

import numpy as np
import pytest

from moment_atlas import (
    EdgeWord,
    NotClosed,
    SampledPath,
    betti1,
    covers_trail,
    cycle_basis,
    euler_classify,
    homology_coefficients,
    realize,
    reduce_word,
    winding_number,
)
from moment_atlas.fixtures import grid_complex, tree_complex
from moment_atlas.planar_geometry import extract_faces
from conftest import closed_walk


def test_betti_numbers(figure_eight):
    assert betti1(figure_eight) == 2
    assert betti1(tree_complex()) == 0
    for k in (1, 2, 3):
        assert betti1(grid_complex(k)) == k * k


class TestCycleBasis:
    def test_rank_and_shape(self, grid2, figure_eight):
        for complex, m in ((grid2, 4), (figure_eight, 2)):
            basis = cycle_basis(complex)
            assert len(basis.chords) == m
            for chord, loop in zip(basis.chords, basis.loops):
                assert loop.is_closed(complex)
                uses = [e for e, _ in loop if e == chord]
                assert len(uses) == 1

    def test_single_loop(self):
        from moment_atlas import build_complex
        from moment_atlas.fixtures import square_path

        basis = cycle_basis(build_complex([square_path()]))
        assert len(basis.chords) == 1
        assert len(basis.loops[0]) == 1

    def test_deterministic_per_seed(self, grid2):
        assert cycle_basis(grid2, seed=5).chords == cycle_basis(grid2, seed=5).chords
        assert cycle_basis(grid2).chords == cycle_basis(grid2).chords


class TestHomologyCoefficients:
    def test_commutator_is_trivial(self, figure_eight):
        basis = cycle_basis(figure_eight)
        w = EdgeWord(((0, 1), (1, 1), (0, -1), (1, -1)))
        assert homology_coefficients(w, basis, figure_eight).tolist() == [0, 0]

    def test_double_loop(self, figure_eight):
        basis = cycle_basis(figure_eight)
        w = EdgeWord(((0, 1), (0, 1)))
        counts = sorted(homology_coefficients(w, basis, figure_eight).tolist())
        assert counts == [0, 2]

    def test_open_word_rejected(self, grid2):
        basis = cycle_basis(grid2)
        open_word = EdgeWord(((0, 1),))
        with pytest.raises(NotClosed):
            homology_coefficients(open_word, basis, grid2)

    def test_additive_under_concatenation(self, grid2, rng):
        basis = cycle_basis(grid2)
        root_words = []
        for _ in range(20):
            w = closed_walk(grid2, rng)
            if w.vertex_sequence(grid2)[0] == basis.root:
                root_words.append(w)
            if len(root_words) >= 2:
                break
        if len(root_words) >= 2:
            w1, w2 = root_words
            n1 = homology_coefficients(w1, basis, grid2)
            n2 = homology_coefficients(w2, basis, grid2)
            n12 = homology_coefficients(w1 * w2, basis, grid2)
            assert np.array_equal(n12, n1 + n2)

    def test_matches_winding_oracle(self, grid2, rng):
        # oracle: windings of the realized path at face interior points must
        # equal the winding matrix of the basis loops applied to the
        # homology coefficients
        basis = cycle_basis(grid2)
        faces = extract_faces(grid2)
        W = np.array(
            [
                [
                    winding_number(realize(loop, grid2), f.rep_point)
                    for loop in basis.loops
                ]
                for f in faces.faces
            ]
        )
        for _ in range(20):
            w = closed_walk(grid2, rng, max_len=20)
            n = homology_coefficients(w, basis, grid2)
            path = realize(w, grid2)
            winds = np.array(
                [winding_number(path, f.rep_point) for f in faces.faces]
            )
            assert np.array_equal(W @ n, winds)


class TestReduceWord:
    def test_cancellation(self, figure_eight):
        basis = cycle_basis(figure_eight)
        assert reduce_word(EdgeWord(((0, 1), (0, -1))), basis, figure_eight) == ()

    def test_commutator_reduces_to_length_4(self, figure_eight):
        basis = cycle_basis(figure_eight)
        w = EdgeWord(((0, 1), (1, 1), (0, -1), (1, -1)))
        assert len(reduce_word(w, basis, figure_eight)) == 4

    def test_tree_supported_word_is_trivial(self, grid2, rng):
        basis = cycle_basis(grid2)
        tree_edges = sorted(basis.tree_edges)
        # out-and-back walk over two tree edges
        e = tree_edges[0]
        w = EdgeWord(((e, 1), (e, -1)))
        assert reduce_word(w, basis, grid2) == ()

    def test_trivial_reduction_implies_trivial_homology(self, grid2, rng):
        basis = cycle_basis(grid2)
        for _ in range(25):
            w = closed_walk(grid2, rng)
            if not reduce_word(w, basis, grid2):
                assert not homology_coefficients(w, basis, grid2).any()


class TestEuler:
    def test_figure_eight_unicursal(self, figure_eight):
        cls = euler_classify(figure_eight)
        assert cls.kind == "unicursal"
        assert Counter(e for e, _ in cls.trail) == Counter({0: 1, 1: 1})

    def test_open_arc_traversable(self):
        from moment_atlas import build_complex

        arc = SampledPath.from_points([[0.0, 0.0], [1.0, 0.0], [2.0, 1.0]])
        complex = build_complex([arc])
        cls = euler_classify(complex)
        assert cls.kind == "traversable"
        assert len(cls.trail) == complex.n_edges

    def test_grid_not_traversable(self, grid2):
        # degree census oracle: four lattice points of odd degree
        odd = [v for v in range(grid2.n_vertices) if grid2.degree(v) % 2]
        assert len(odd) == 4
        assert euler_classify(grid2).kind == "not_traversable"

    def test_grid1_unicursal_trail_valid(self):
        g1 = grid_complex(1)
        cls = euler_classify(g1)
        assert cls.kind == "unicursal"
        assert Counter(e for e, _ in cls.trail) == Counter(
            {i: 1 for i in range(g1.n_edges)}
        )
        cls.trail.vertex_sequence(g1)  # must be a connected walk


class TestCoversTrail:
    def brute_force_covers(self, word, trail, complex):
        # exhaustive DFS over position walks, independent of the BFS version
        letters = trail.letters
        L = len(letters)
        verts = trail.vertex_sequence(complex)
        cyclic = verts[0] == verts[-1]
        n_pos = L if cyclic else L + 1

        def moves(p):
            out = []
            if cyclic:
                out.append(((p + 1) % n_pos, letters[p]))
                q = (p - 1) % n_pos
                out.append((q, (letters[q][0], -letters[q][1])))
            else:
                if p < L:
                    out.append((p + 1, letters[p]))
                if p > 0:
                    out.append((p - 1, (letters[p - 1][0], -letters[p - 1][1])))
            return out

        def dfs(pos, k):
            if k == len(word.letters):
                return True
            return any(
                dfs(q, k + 1) for q, lt in moves(pos) if lt == word.letters[k]
            )

        return any(dfs(p, 0) for p in range(n_pos))

    def test_trail_covers_itself(self, figure_eight):
        trail = euler_classify(figure_eight).trail
        assert covers_trail(trail, trail, figure_eight)

    def test_forward_backward(self, figure_eight):
        trail = euler_classify(figure_eight).trail
        w = trail * trail.inverse()
        assert covers_trail(w, trail, figure_eight)

    def test_skipping_is_not_covered(self):
        # open 3-edge chain: a walk cannot jump over the middle edge
        from moment_atlas import build_complex

        chain = SampledPath.from_points(
            [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]
        )
        complex = build_complex([chain])
        cls = euler_classify(complex)
        first, last = cls.trail.letters[0], cls.trail.letters[-1]
        w = EdgeWord((first, (last[0], last[1])))
        assert not covers_trail(w, cls.trail, complex)

    def test_matches_brute_force(self, figure_eight, rng):
        trail = euler_classify(figure_eight).trail
        alphabet = [(0, 1), (0, -1), (1, 1), (1, -1)]
        for _ in range(40):
            w = EdgeWord(
                tuple(rng.choice(alphabet) for _ in range(rng.randrange(1, 6)))
            )
            assert covers_trail(w, trail, figure_eight) == self.brute_force_covers(
                w, trail, figure_eight
            )
