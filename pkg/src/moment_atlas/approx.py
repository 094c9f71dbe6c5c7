"""Tensor Chebyshev approximation of Lipschitz functions on [-1, 1]^n.

The one-dimensional smoothing operator is discrete convolution with a
normalized Jackson kernel on a cosine grid: the weights are nonnegative and
sum to one exactly (the trapezoid rule is exact for the kernel's degree), so
the operator has sup norm one, reproduces constants, and preserves evenness.
Applied once per axis it yields a polynomial of degree ``k`` in each variable
with sup error at most ``C_OP * n * L / k`` for functions L-Lipschitz along
every coordinate axis.

``C_OP`` is the measured constant of this kernel, documented here rather than
assumed; the classical target for a norm-one smoothing operator is pi.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

C_OP = 3.2


@dataclass(frozen=True)
class TensorPolynomial:
    """Coefficients in the product Chebyshev basis, shape (k+1,)*n."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coefficients, dtype=float))
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def n(self) -> int:
        return self.coefficients.ndim

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1


def _jackson_multipliers(k: int):
    """Cosine-coefficient multipliers of the degree-<=k Jackson kernel.

    The kernel is ``c * (sin(m t / 2) / sin(t / 2))**4`` with
    ``m = k // 2 + 1`` (trigonometric degree ``2m - 2 <= k``), normalized to
    unit mass; coefficients come from an exact trapezoid rule.
    """
    m = k // 2 + 1
    deg = 2 * m - 2
    M = 4 * (deg + k + 1)
    t = 2.0 * np.pi * np.arange(M) / M
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(m * t / 2.0) / np.sin(t / 2.0)
    ratio[0] = m  # limit value at t = 0
    kern = ratio**4
    mults = np.array([np.sum(kern * np.cos(s * t)) for s in range(k + 1)])
    return mults / mults[0]


def _cosine_grid(M: int):
    """Grid angles and x-values with exact mirror symmetry x_j = x_{M-j}."""
    theta = 2.0 * np.pi * np.arange(M) / M
    half = np.cos(theta[: M // 2 + 1])
    x = np.concatenate([half, half[1:-1][::-1]])
    return theta, x


def _axis_transform(k: int, M: int, theta):
    """(M, k+1) map from grid samples to smoothed Chebyshev coefficients."""
    mults = _jackson_multipliers(k)
    s = np.arange(k + 1)
    design = np.cos(np.outer(theta, s))
    scale = np.where(s == 0, 1.0, 2.0) / M
    return design * (scale * mults)[None, :]


def approximate(f, n: int, k: int, lipschitz: float | None = None) -> TensorPolynomial:
    """Polynomial of degree ``k`` per variable approximating ``f`` on the cube.

    ``f`` maps an ``(N, n)`` array of points to ``N`` values.  When ``f`` is
    L-Lipschitz along each axis the sup error is at most
    ``error_bound(n, k, L)``; ``lipschitz`` is accepted for symmetry with that
    bound but not used in the construction.
    """
    if k < 1:
        raise ValueError("degree must be at least 1")
    if n < 1:
        raise ValueError("dimension must be at least 1")
    M = 8 * k
    theta, x = _cosine_grid(M)
    grids = np.meshgrid(*([x] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    vals = np.asarray(f(pts), dtype=float)
    if vals.shape != (pts.shape[0],):
        raise ValueError("f must map an (N, n) array to N values")
    out = vals.reshape((M,) * n)
    T = _axis_transform(k, M, theta)
    for _ in range(n):
        # contract the current leading sample axis; the result axis lands at
        # the end, so n passes restore the original axis order
        out = np.tensordot(out, T, axes=([0], [0]))
    return TensorPolynomial(coefficients=out)


def error_bound(n: int, k: int, lipschitz: float) -> float:
    """Documented sup-error bound of :func:`approximate`."""
    return C_OP * n * lipschitz / k


def _chebyshev_matrix(x, k: int):
    """Values T_j(x), shape (len(x), k+1), by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((x.shape[0], k + 1))
    out[:, 0] = 1.0
    if k >= 1:
        out[:, 1] = x
    for j in range(2, k + 1):
        out[:, j] = 2.0 * x * out[:, j - 1] - out[:, j - 2]
    return out


def evaluate(poly: TensorPolynomial, points) -> np.ndarray:
    """Evaluate at an (N, n) array of points (clamped with a warning outside).

    A single n-vector is also accepted and yields a scalar.
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != poly.n:
        raise ValueError("point dimension does not match the polynomial")
    if np.any(np.abs(pts) > 1.0 + 1e-12):
        warnings.warn("points outside [-1, 1]^n are clamped", stacklevel=2)
    pts = np.clip(pts, -1.0, 1.0)
    k = poly.degree
    out = np.broadcast_to(poly.coefficients, (pts.shape[0],) + poly.coefficients.shape)
    for axis in range(poly.n):
        # Clenshaw along the first coefficient axis, batched over points;
        # the contracted result keeps the point axis first, so the next
        # coefficient axis is again at position 1
        x = pts[:, axis]
        two_x = (2.0 * x).reshape((-1,) + (1,) * (out.ndim - 2))
        b1 = np.zeros(out.shape[:1] + out.shape[2:])
        b2 = np.zeros_like(b1)
        for j in range(k, 0, -1):
            b1, b2 = out[:, j] + two_x * b1 - b2, b1
        out = out[:, 0] + (two_x / 2.0) * b1 - b2
    result = np.asarray(out).reshape(pts.shape[0])
    return float(result[0]) if single else result


def evaluate_grid(poly: TensorPolynomial, axes) -> np.ndarray:
    """Evaluate on a tensor grid given per-axis coordinate arrays."""
    out = poly.coefficients
    for axis in range(poly.n):
        x = np.clip(np.asarray(axes[axis], dtype=float), -1.0, 1.0)
        T = _chebyshev_matrix(x, poly.degree)
        out = np.tensordot(out, T, axes=([0], [1]))
    return out


def sup_error(f, poly: TensorPolynomial, resolution: int) -> float:
    """Max |f - poly| over the uniform tensor grid of the given resolution."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    grid = np.linspace(-1.0, 1.0, resolution)
    approx_vals = evaluate_grid(poly, [grid] * poly.n)
    grids = np.meshgrid(*([grid] * poly.n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    true_vals = np.asarray(f(pts), dtype=float).reshape(approx_vals.shape)
    return float(np.abs(true_vals - approx_vals).max())
