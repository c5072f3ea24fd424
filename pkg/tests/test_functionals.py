"""Energy integrals and the weak-form identity checks."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from betaos import (
    FlowParameters,
    build_grid,
    builtin_profile,
    energy_integrals,
    verify_identities,
)

I0SQ = float(Fraction(256, 315))
I1SQ = float(Fraction(256, 105))
I2SQ = float(Fraction(128, 5))
# poiseuille with phi = (1-z^2)^2, alpha = 1, beta = 0:
# Re Q = int { (1-z^2)((phi')^2 + phi^2) - phi^2 } dz  (symbolic)
RE_Q_POISEUILLE = float(Fraction(256, 165))


def bump(grid):
    """phi = (1 - z^2)^2 sampled on the grid (clamped test function)."""
    return (1.0 - grid.points**2) ** 2 + 0j


@pytest.mark.parametrize("n", [32, 48, 128])
def test_symbolic_energy_integrals(n):
    grid = build_grid(n)
    profile = builtin_profile("couette")
    params = FlowParameters(alpha=1.0, reynolds=100.0, beta=0.0)
    ef = energy_integrals(bump(grid), profile, params, grid)
    assert ef.i0sq == pytest.approx(I0SQ, abs=1e-10)
    assert ef.i1sq == pytest.approx(I1SQ, abs=1e-10)
    assert ef.i2sq == pytest.approx(I2SQ, abs=1e-10)


def test_couette_real_bump_q_vanishes(grid32):
    """Odd U makes Re Q vanish; real phi makes Im Q vanish."""
    profile = builtin_profile("couette")
    params = FlowParameters(alpha=1.0, reynolds=100.0, beta=0.0)
    ef = energy_integrals(bump(grid32), profile, params, grid32)
    assert abs(ef.re_q) < 1e-12
    assert abs(ef.im_q) < 1e-12
    assert ef.im_q_discarded <= 1e-15


def test_poiseuille_bump_re_q_symbolic(grid32):
    profile = builtin_profile("poiseuille")
    params = FlowParameters(alpha=1.0, reynolds=100.0, beta=0.0)
    ef = energy_integrals(bump(grid32), profile, params, grid32)
    assert ef.re_q == pytest.approx(RE_Q_POISEUILLE, abs=1e-12)


def test_q_forms_agree_for_bump(grid32):
    profile = builtin_profile("bickley_jet")
    params = FlowParameters(alpha=0.7, reynolds=100.0, beta=0.4)
    z = grid32.points
    phi = (1.0 - z**2) ** 2 * (1.0 + 0.3j * z)
    ef = energy_integrals(phi, profile, params, grid32)
    scale = 1.0 + abs(ef.q_complex)
    assert abs(ef.q_complex.real - ef.re_q) < 1e-8 * scale
    assert abs(ef.q_complex.imag - ef.im_q) < 1e-8 * scale


def test_q_forms_agree_on_eigenfunctions(solve, grid128):
    params = FlowParameters(alpha=1.0, reynolds=5000.0, beta=0.0)
    profile = builtin_profile("poiseuille")
    for p in solve("poiseuille", 1.0, 5000.0, 0.0, 128):
        if not p.converged:
            continue
        ef = energy_integrals(p.phi, profile, params, grid128)
        scale = 1.0 + abs(ef.q_complex)
        assert abs(ef.q_complex.real - ef.re_q) < 1e-8 * scale
        assert abs(ef.q_complex.imag - ef.im_q) < 1e-8 * scale


def test_identities_on_converged_eigenpairs(solve, grid128):
    params = FlowParameters(alpha=1.0, reynolds=5000.0, beta=0.0)
    profile = builtin_profile("poiseuille")
    checked = 0
    for p in solve("poiseuille", 1.0, 5000.0, 0.0, 128):
        if not p.converged or p.drift > 1e-8:
            continue
        ef = energy_integrals(p.phi, profile, params, grid128)
        rep = verify_identities(p, ef, params)
        assert rep.identity_residual < 1e-7
        assert rep.cr_formula_error < 1e-7
        assert rep.ci_formula_error < 1e-7
        checked += 1
    assert checked >= 10


def test_identity_residual_decays_with_n(solve):
    """Fixed physical modes: residuals fall as resolution rises.

    Tracks the five least stable converged modes, which persist across
    resolutions (a max over the whole converged set would not be monotone:
    higher n admits ever deeper, wigglier modes).
    """
    params = FlowParameters(alpha=1.0, reynolds=2000.0, beta=0.5)
    profile = builtin_profile("poiseuille")
    worst = {}
    for n in (48, 96):
        grid = build_grid(n)
        residuals = []
        for p in solve("poiseuille", 1.0, 2000.0, 0.5, n):
            if p.converged:
                ef = energy_integrals(p.phi, profile, params, grid)
                residuals.append(verify_identities(p, ef, params).identity_residual)
            if len(residuals) == 5:
                break
        worst[n] = max(residuals)
    assert worst[96] < worst[48]


@settings(max_examples=10, deadline=None)
@given(scale=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3,
                                allow_nan=False, allow_infinity=False))
def test_reports_scale_invariant(solve, grid128, scale):
    """All identity defects are degree-zero homogeneous in phi."""
    params = FlowParameters(alpha=1.0, reynolds=5000.0, beta=0.0)
    profile = builtin_profile("poiseuille")
    p = next(q for q in solve("poiseuille", 1.0, 5000.0, 0.0, 128) if q.converged)
    base = verify_identities(p, energy_integrals(p.phi, profile, params, grid128), params)
    scaled_ef = energy_integrals(scale * p.phi, profile, params, grid128)
    scaled = verify_identities(p, scaled_ef, params)
    assert scaled.identity_residual == pytest.approx(base.identity_residual, abs=1e-12)
    assert scaled.cr_formula_error == pytest.approx(base.cr_formula_error, abs=1e-12)
    assert scaled.ci_formula_error == pytest.approx(base.ci_formula_error, abs=1e-12)


def test_shape_validation(grid32):
    profile = builtin_profile("couette")
    params = FlowParameters(alpha=1.0, reynolds=100.0, beta=0.0)
    with pytest.raises(ValueError, match="shape"):
        energy_integrals(np.ones(10, dtype=complex), profile, params, grid32)


def test_fields_nonnegative_finite(solve, grid128):
    params = FlowParameters(alpha=2.0, reynolds=1000.0, beta=-1.0)
    profile = builtin_profile("tanh_layer")
    for p in solve("tanh_layer", 2.0, 1000.0, -1.0, 128)[:10]:
        ef = energy_integrals(p.phi, profile, params, grid128)
        assert ef.i0sq >= 0 and ef.i1sq >= 0 and ef.i2sq >= 0
        rep = verify_identities(p, ef, params)
        for v in (rep.identity_residual, rep.cr_formula_error, rep.ci_formula_error):
            assert np.isfinite(v) and v >= 0
