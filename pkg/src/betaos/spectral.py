"""Chebyshev-Gauss-Lobatto collocation primitives.

Grids, dense differentiation matrices and Clenshaw-Curtis quadrature weights
on z in [-1, 1], shared by the eigensolver and the functional evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SpectralGrid", "build_grid", "integrate", "interpolation_matrix"]

N_MIN = 8
N_MAX = 2048


@dataclass(frozen=True)
class SpectralGrid:
    """Collocation grid of polynomial degree ``n`` (n+1 points, ascending).

    ``d2 = d1 @ d1`` and ``d4 = d2 @ d2`` by construction; ``quad_weights``
    are the Clenshaw-Curtis weights for the integral over [-1, 1].
    Immutable (arrays are write-protected) and shareable across threads.
    """

    n: int
    points: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d4: np.ndarray
    quad_weights: np.ndarray


def _cgl_points_desc(n: int) -> np.ndarray:
    # sine form of cos(j*pi/n): exactly antisymmetric about z = 0
    j = np.arange(n + 1)
    return np.sin(np.pi * (n - 2.0 * j) / (2.0 * n))


def _diffmat_desc(n: int) -> np.ndarray:
    """First-derivative matrix on descending CGL points.

    Off-diagonal entries use the trigonometric identity
    x_i - x_j = -2 sin((t_i+t_j)/2) sin((t_i-t_j)/2) with the lower half
    filled by antisymmetry so every sine argument stays well conditioned;
    diagonal entries come from the negative row sum.
    """
    j = np.arange(n + 1)
    theta = np.pi * j / n
    half = (n + 1) // 2 + 1
    th = np.tile(theta / 2.0, (n + 1, 1))
    dx = np.empty((n + 1, n + 1))
    top = th.T[:half, :]
    dx[:half, :] = -2.0 * np.sin(top + th[:half, :]) * np.sin(top - th[:half, :])
    dx[half:, :] = -dx[n - np.arange(half, n + 1)][:, ::-1]
    np.fill_diagonal(dx, 1.0)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** j
    d = np.outer(c, 1.0 / c) / dx
    np.fill_diagonal(d, 0.0)
    d -= np.diag(d.sum(axis=1))
    return d


def _clenshaw_curtis_desc(n: int) -> np.ndarray:
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    ii = np.arange(1, n)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n * n - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4 * k * k - 1)
        v -= np.cos(n * theta[ii]) / (n * n - 1)
    else:
        w[0] = w[n] = 1.0 / (n * n)
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[ii]) / (4 * k * k - 1)
    w[ii] = 2.0 * v / n
    return w


def build_grid(n: int) -> SpectralGrid:
    """Build the degree-``n`` grid with differentiation and quadrature rules."""
    if not (N_MIN <= n <= N_MAX):
        raise ValueError(f"grid degree n must satisfy {N_MIN} <= n <= {N_MAX}; got {n}")
    points = _cgl_points_desc(n)[::-1].copy()
    d_desc = _diffmat_desc(n)
    d1 = d_desc[::-1, ::-1].copy()
    d2 = d1 @ d1
    d4 = d2 @ d2
    weights = _clenshaw_curtis_desc(n)[::-1].copy()
    for arr in (points, d1, d2, d4, weights):
        arr.setflags(write=False)
    return SpectralGrid(n=n, points=points, d1=d1, d2=d2, d4=d4, quad_weights=weights)


def integrate(grid: SpectralGrid, f: np.ndarray) -> float | complex:
    """Clenshaw-Curtis approximation of the integral of f over [-1, 1].

    Exact for polynomials of degree <= n sampled on the grid.
    """
    f = np.asarray(f)
    if f.shape != (grid.n + 1,):
        raise ValueError(f"integrand has shape {f.shape}, expected ({grid.n + 1},)")
    return grid.quad_weights @ f


def interpolation_matrix(grid: SpectralGrid, targets: np.ndarray) -> np.ndarray:
    """Barycentric interpolation matrix from grid points to arbitrary targets.

    Rows evaluating exactly at a grid point reduce to a unit row, so nodal
    values (e.g. enforced zeros at the walls) are carried over bit-for-bit.
    """
    z = grid.points
    t = np.asarray(targets, dtype=float)
    wb = np.ones(grid.n + 1)
    wb[1::2] = -1.0
    wb[0] *= 0.5
    wb[-1] *= 0.5
    diff = t[:, None] - z[None, :]
    hit_rows, hit_cols = np.nonzero(diff == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = wb[None, :] / diff
        mat = ratio / ratio.sum(axis=1)[:, None]
    if hit_rows.size:
        mat[hit_rows, :] = 0.0
        mat[hit_rows, hit_cols] = 1.0
    return mat
