import random

import pytest

from moment_atlas import EdgeWord
from moment_atlas.fixtures import figure_eight_complex, grid_complex


def closed_walk(complex, rng, max_len=14):
    """One seeded closed walk on a complex, as an EdgeWord."""
    for _ in range(400):
        v0 = rng.randrange(complex.n_vertices)
        v = v0
        letters = []
        for _ in range(rng.randrange(2, max_len)):
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


@pytest.fixture(scope="session")
def grid2():
    return grid_complex(2)


@pytest.fixture(scope="session")
def figure_eight():
    return figure_eight_complex()


@pytest.fixture
def rng():
    return random.Random(1234)
