"""Energy integrals of an eigenfunction and the exact identities they satisfy.

For a mode phi with phase velocity c the weak form of the stability equation
ties together the derivative energies

    In^2 = int |D^n phi|^2 dz          (n = 0, 1, 2)

and the flow-weighted quadratic form

    Q = int { U (|phi'|^2 + a^2 |phi|^2) + (U'' - b) |phi|^2 } dz
        + int U' phi' conj(phi) dz

through  I2^2 + 2 a^2 I1^2 + a^4 I0^2 = i a c R (I1^2 + a^2 I0^2) - i a R Q,
whose real and imaginary parts reconstruct c_r and c_i as Rayleigh-like
quotients.  This module evaluates the integrals and reports the residuals of
those identities for computed eigenpairs.

Integrands are quadratics in phi, so they carry twice the polynomial degree
of the interpolant; integrals are therefore evaluated on an auxiliary grid of
degree 2n + 4 (barycentric interpolation of phi, Clenshaw-Curtis weights)
where every such product integrates exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING
import warnings

import numpy as np

from .profiles import VelocityProfile, sample_profile
from .spectral import N_MAX, SpectralGrid, build_grid, interpolation_matrix

if TYPE_CHECKING:  # pragma: no cover
    from .eigensolver import Eigenpair, FlowParameters

__all__ = [
    "EnergyFunctionals",
    "IdentityReport",
    "energy_integrals",
    "verify_identities",
    "norm_integrals",
]

# discrete Im(Q) is pointwise real; flag if rounding ever leaves more than this
IMAG_LEAK_TOL = 1e-9


@dataclass(frozen=True)
class EnergyFunctionals:
    """Energy integrals of one eigenfunction.

    ``re_q``/``im_q`` are the integrated-by-parts forms of Re Q and Im Q;
    their agreement with ``q_complex`` is a property of the evaluation, not
    an assumption, and is exercised by the test suite.  ``im_q_discarded``
    records the magnitude of the spurious imaginary remainder dropped when
    reducing the Im Q integrand to a real number.
    """

    i0sq: float
    i1sq: float
    i2sq: float
    q_complex: complex
    re_q: float
    im_q: float
    im_q_discarded: float = 0.0


@dataclass(frozen=True)
class IdentityReport:
    """Defects of the weak-form identity and the c_r / c_i quotient formulas."""

    identity_residual: float
    cr_formula_error: float
    ci_formula_error: float


@lru_cache(maxsize=8)
def _fine_setup(n: int) -> tuple[SpectralGrid, np.ndarray]:
    """Auxiliary quadrature grid of degree 2n + 4 and the interpolation onto it."""
    nf = min(2 * n + 4, N_MAX)
    if nf <= n:
        nf = n
    fine = build_grid(nf)
    interp = interpolation_matrix(build_grid(n), fine.points)
    interp.setflags(write=False)
    return fine, interp


def _fine_fields(phi: np.ndarray, grid: SpectralGrid):
    fine, interp = _fine_setup(grid.n)
    ph = interp @ phi
    dph = fine.d1 @ ph
    d2ph = fine.d1 @ dph
    return fine, ph, dph, d2ph


def norm_integrals(phi: np.ndarray, alpha: float, grid: SpectralGrid) -> tuple[float, float]:
    """(I0^2, I1^2) for phi, on the same quadrature path as energy_integrals."""
    phi = np.asarray(phi)
    if phi.shape != (grid.n + 1,):
        raise ValueError(f"phi has shape {phi.shape}, expected ({grid.n + 1},)")
    fine, ph, dph, _ = _fine_fields(phi, grid)
    w = fine.quad_weights
    return float(w @ np.abs(ph) ** 2), float(w @ np.abs(dph) ** 2)


def energy_integrals(
    phi: np.ndarray,
    profile: VelocityProfile,
    params: FlowParameters,
    grid: SpectralGrid,
) -> EnergyFunctionals:
    """Evaluate all energy integrals of ``phi`` for the given flow.

    ``q_complex`` uses the form with the U' phi' conj(phi) cross term, while
    ``re_q`` and ``im_q`` use the integrated-by-parts forms

        Re Q = int { U (|phi'|^2 + a^2 |phi|^2) + (U''/2 - b) |phi|^2 } dz
        Im Q = (i/2) int U' { phi conj(phi)' - phi' conj(phi) } dz

    so a sign slip in either derivation shows up as a mismatch.
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (grid.n + 1,):
        raise ValueError(f"phi has shape {phi.shape}, expected ({grid.n + 1},)")
    alpha, beta = params.alpha, params.beta
    fine, ph, dph, d2ph = _fine_fields(phi, grid)
    w = fine.quad_weights
    u, du, d2u = sample_profile(profile, fine.points)

    abs_ph2 = np.abs(ph) ** 2
    abs_dph2 = np.abs(dph) ** 2
    i0sq = float(w @ abs_ph2)
    i1sq = float(w @ abs_dph2)
    i2sq = float(w @ np.abs(d2ph) ** 2)

    base = u * (abs_dph2 + alpha**2 * abs_ph2)
    q_complex = complex(
        w @ (base + (d2u - beta) * abs_ph2) + w @ (du * dph * np.conj(ph))
    )
    re_q = float(w @ (base + (0.5 * d2u - beta) * abs_ph2))
    im_q_raw = 0.5j * (w @ (du * (ph * np.conj(dph) - dph * np.conj(ph))))
    leak = abs(float(im_q_raw.imag))
    if leak > IMAG_LEAK_TOL:
        warnings.warn(
            f"Im Q integrand left a spurious imaginary part of {leak:.3e}",
            stacklevel=2,
        )
    return EnergyFunctionals(
        i0sq=i0sq,
        i1sq=i1sq,
        i2sq=i2sq,
        q_complex=q_complex,
        re_q=re_q,
        im_q=float(im_q_raw.real),
        im_q_discarded=leak,
    )


def verify_identities(
    pair: Eigenpair, ef: EnergyFunctionals, params: FlowParameters
) -> IdentityReport:
    """Residuals of the weak-form identity and the c_r / c_i quotients.

    The identity residual is relative, |LHS - RHS| / (|LHS| + |RHS|), because
    the two sides range from O(1) to O(alpha R) across parameter sweeps.  The
    quotient errors are absolute differences against pair.c; all three are
    invariant under rescaling of the eigenfunction.
    """
    alpha, reynolds = params.alpha, params.reynolds
    den = ef.i1sq + alpha**2 * ef.i0sq
    diss = ef.i2sq + 2.0 * alpha**2 * ef.i1sq + alpha**4 * ef.i0sq
    rhs = 1j * alpha * reynolds * (pair.c * den - ef.q_complex)
    identity_residual = abs(diss - rhs) / (abs(diss) + abs(rhs))
    cr_formula_error = abs(pair.c.real - ef.re_q / den)
    ci_formula_error = abs(
        pair.c.imag - (ef.im_q - diss / (alpha * reynolds)) / den
    )
    return IdentityReport(
        identity_residual=float(identity_residual),
        cr_formula_error=float(cr_formula_error),
        ci_formula_error=float(ci_formula_error),
    )
