"""Reduction of higher-dimensional moment problems to planar ones.

Pairs of direction vectors project a path to the plane; the multinomial
expansion identity ties the projected moments back to the full moment family,
so vanishing questions transfer between the two settings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial

import numpy as np

from .curve_model import SampledPath
from .errors import DegreeTooLarge
from .moments import MomentSpec, moment_quadrature, moments_quadrature

_MAX_EXPANSION_DEGREE = 12


@dataclass(frozen=True)
class DirectionPair:
    """Two non-proportional direction vectors and the seed that drew them."""

    v1: np.ndarray
    v2: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        v1 = np.asarray(self.v1, dtype=float)
        v2 = np.asarray(self.v2, dtype=float)
        if v1.shape != v2.shape or v1.ndim != 1:
            raise ValueError("direction vectors must share one shape")
        if not v1.any() or not v2.any():
            raise ValueError("direction vectors must be nonzero")
        cross = np.outer(v1, v2) - np.outer(v2, v1)
        if np.abs(cross).max() == 0.0:
            raise ValueError("direction vectors must not be proportional")
        v1.setflags(write=False)
        v2.setflags(write=False)
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)

    @property
    def dim(self) -> int:
        return self.v1.shape[0]


def sample_direction(seed: int, n: int) -> DirectionPair:
    """Seeded uniform draw of both directions from [-1, 1]^n.

    Stands in for the measure-one set of generic directions; callers should
    sample several seeds when corroborating a vanishing claim.
    """
    if n < 2:
        raise ValueError("need dimension at least 2")
    rng = np.random.default_rng(seed)
    v = rng.uniform(-1.0, 1.0, size=(2, n))
    return DirectionPair(v1=v[0], v2=v[1], seed=seed)


def project(path: SampledPath, pair: DirectionPair) -> SampledPath:
    """Planar path of inner products against the two directions."""
    if pair.dim != path.dim:
        raise ValueError("direction dimension does not match the path")
    pts = path.points @ np.stack([pair.v1, pair.v2], axis=1)
    return SampledPath(times=path.times.copy(), points=pts, closed=path.closed)


def restricted_moment(path_v: SampledPath, d: int):
    """The pair (integral of g1' dt, integral of g1^d g2' dt) of a planar path."""
    if path_v.dim != 2:
        raise ValueError("restricted moments take a projected planar path")
    if d < 0:
        raise ValueError("degree must be non-negative")
    first = moment_quadrature(path_v, MomentSpec(powers=(0, 0), i=1))
    second = moment_quadrature(path_v, MomentSpec(powers=(d, 0), i=2))
    return first, second


def multinomial(d: int, powers) -> int:
    out = factorial(d)
    for p in powers:
        out //= factorial(p)
    return out


def expansion_check(path: SampledPath, pair: DirectionPair, d: int, tol: float) -> bool:
    """Verify the multinomial identity between projected and full moments.

    The projected moment ``integral of g1v^d g2v'`` must equal the multinomial
    combination of the n-dimensional moments of total degree ``d`` weighted by
    the direction coordinates.  Both sides are computed by exact quadrature.
    """
    if d > _MAX_EXPANSION_DEGREE:
        raise DegreeTooLarge(
            "degree %d exceeds the expansion guard %d" % (d, _MAX_EXPANSION_DEGREE)
        )
    if d < 0:
        raise ValueError("degree must be non-negative")
    n = path.dim
    lhs = moment_quadrature(project(path, pair), MomentSpec(powers=(d, 0), i=2))

    powers_list = [p for p in product(range(d + 1), repeat=n) if sum(p) == d]
    specs = [
        MomentSpec(powers=p, i=i) for p in powers_list for i in range(1, n + 1)
    ]
    values = moments_quadrature(path, specs)
    rhs = 0.0
    idx = 0
    for p in powers_list:
        weight = multinomial(d, p) * float(np.prod(pair.v1 ** np.asarray(p)))
        for i in range(n):
            rhs += weight * pair.v2[i] * values[idx]
            idx += 1
    return bool(abs(lhs - rhs) <= tol)
