"""Collocation primitives: grids, differentiation, quadrature."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from betaos import build_grid, integrate, interpolation_matrix

# symbolic values for phi = (1 - z^2)^2:
#   int phi^2       = 256/315
#   int (phi')^2    = 256/105   (phi' = -4 z (1 - z^2))
#   int (phi'')^2   = 128/5     (phi'' = -4 + 12 z^2)
I0SQ = float(Fraction(256, 315))
I1SQ = float(Fraction(256, 105))
I2SQ = float(Fraction(128, 5))


def test_grid_range_validation():
    with pytest.raises(ValueError):
        build_grid(7)
    with pytest.raises(ValueError):
        build_grid(2049)


def test_points_ascending_and_symmetric(grid64):
    z = grid64.points
    assert z[0] == -1.0 and z[-1] == 1.0
    assert np.all(np.diff(z) > 0)
    assert np.array_equal(z, -z[::-1])
    ref = np.cos(np.pi * np.arange(64, -1, -1) / 64)
    assert np.max(np.abs(z - ref)) < 1e-15


def test_weights_positive_sum_two():
    for n in (8, 33, 64, 128):
        g = build_grid(n)
        assert np.all(g.quad_weights > 0)
        assert abs(g.quad_weights.sum() - 2.0) < 1e-14


def test_derivative_powers_consistent(grid64):
    assert np.allclose(grid64.d2, grid64.d1 @ grid64.d1, atol=0)
    assert np.allclose(grid64.d4, grid64.d2 @ grid64.d2, atol=0)


@pytest.mark.parametrize("n", [8, 16, 33, 64])
def test_monomial_exactness(n):
    g = build_grid(n)
    z = g.points
    for k in range(n + 1):
        deriv = k * z ** (k - 1) if k > 0 else np.zeros_like(z)
        scale = max(1.0, np.max(np.abs(deriv)))
        assert np.max(np.abs(g.d1 @ z**k - deriv)) / scale < 1e-9


def test_differentiate_z5():
    g = build_grid(16)
    err = g.d1 @ g.points**5 - 5.0 * g.points**4
    assert np.max(np.abs(err)) < 1e-10


def test_row_sums_vanish(grid128):
    assert np.max(np.abs(grid128.d1.sum(axis=1))) < 1e-10


def test_integrate_constants_and_odd(grid32):
    ones = np.ones(33)
    assert integrate(grid32, ones) == pytest.approx(2.0, abs=1e-14)
    assert abs(integrate(grid32, grid32.points)) < 1e-15


def test_integrate_symbolic_values(grid32):
    z = grid32.points
    assert integrate(grid32, (1 - z**2) ** 4) == pytest.approx(I0SQ, abs=1e-12)
    assert integrate(grid32, 16 * z**2 * (1 - z**2) ** 2) == pytest.approx(I1SQ, abs=1e-12)
    assert integrate(grid32, (-4 + 12 * z**2) ** 2) == pytest.approx(I2SQ, abs=1e-12)


def test_integrate_shape_error(grid32):
    with pytest.raises(ValueError, match="shape"):
        integrate(grid32, np.ones(10))


def test_exponential_convergence():
    exact = math.e - 1.0 / math.e
    for n in (20, 24, 32):
        g = build_grid(n)
        assert abs(integrate(g, np.exp(g.points)) - exact) < 1e-13


def test_integrate_complex(grid32):
    z = grid32.points
    val = integrate(grid32, (1 + 2j) * (1 - z**2))
    assert val == pytest.approx((1 + 2j) * 4.0 / 3.0, abs=1e-13)


@settings(max_examples=25, deadline=None)
@given(
    coeffs=st.lists(st.floats(-5, 5), min_size=2, max_size=2),
    seed=st.integers(0, 2**31 - 1),
)
def test_integrate_linearity(grid32, coeffs, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(33)
    g = rng.standard_normal(33)
    a, b = coeffs
    lhs = integrate(grid32, a * f + b * g)
    rhs = a * integrate(grid32, f) + b * integrate(grid32, g)
    assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(a) + abs(b)))


def test_interpolation_matrix_exact_on_polynomials(grid32):
    targets = np.linspace(-1.0, 1.0, 57)
    P = interpolation_matrix(grid32, targets)
    z = grid32.points
    f = (1 - z**2) ** 2 * (z + 0.25)
    exact = (1 - targets**2) ** 2 * (targets + 0.25)
    assert np.max(np.abs(P @ f - exact)) < 1e-13


def test_interpolation_matrix_nodal_hits(grid32):
    P = interpolation_matrix(grid32, grid32.points[[0, 5, 32]])
    expect = np.zeros((3, 33))
    expect[0, 0] = expect[1, 5] = expect[2, 32] = 1.0
    assert np.array_equal(P, expect)


def test_grid_immutability(grid32):
    with pytest.raises(ValueError):
        grid32.points[0] = 0.0
    with pytest.raises(ValueError):
        grid32.d1[0, 0] = 1.0
