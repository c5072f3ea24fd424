"""Discrete eigenproblem for viscous parallel shear flow on the beta plane.

The modal ansatz reduces the perturbation dynamics to a fourth-order pencil in
the complex phase velocity c:

    (U - c)(D^2 - a^2) phi - (U'' - b) phi = (D^2 - a^2)^2 phi / (i a R)

with clamped walls phi = phi' = 0 at z = +-1 (a: wave number, R: Reynolds
number, b: planetary vorticity gradient).  Collocation uses a clamped trial
basis so the four wall constraints are built into the discrete operators
instead of being tacked on as boundary rows, which keeps B nonsingular and
avoids the spurious infinite eigenvalues row replacement would inject.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .functionals import norm_integrals
from .profiles import VelocityProfile, sample_profile
from .spectral import SpectralGrid, build_grid

__all__ = [
    "FlowParameters",
    "Eigenpair",
    "EigensolverError",
    "assemble",
    "solve_spectrum",
    "clamped_derivative",
    "DEFAULT_N",
    "DEFAULT_AGREE_TOL",
    "DEFAULT_REFINE_RATIO",
]

DEFAULT_N = 128
DEFAULT_AGREE_TOL = 1e-6
DEFAULT_REFINE_RATIO = 1.5


class EigensolverError(RuntimeError):
    """Dense generalized eigendecomposition failed."""


@dataclass(frozen=True)
class FlowParameters:
    """Wave number alpha > 0, Reynolds number > 0, planetary gradient beta."""

    alpha: float
    reynolds: float
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError("alpha must be positive")
        if not (math.isfinite(self.reynolds) and self.reynolds > 0.0):
            raise ValueError("reynolds must be positive")
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")


@dataclass(frozen=True)
class Eigenpair:
    """One mode: phase velocity c, eigenfunction on the full grid, diagnostics.

    ``phi`` carries exact zeros at the walls (the clamped representation also
    zeroes the wall derivative; see :func:`clamped_derivative`) and is scaled
    so the energy norm I1^2 + alpha^2 I0^2 equals one.  ``drift`` is the
    distance to the nearest eigenvalue of the refined-resolution solve;
    ``converged`` records whether it fell below the agreement tolerance.
    """

    c: complex
    phi: np.ndarray
    residual: float
    converged: bool
    drift: float


def _clamped_blocks(grid: SpectralGrid) -> tuple[np.ndarray, np.ndarray]:
    """Interior second/fourth derivative operators on the clamped basis.

    Trial functions are (1 - z^2) l_j(z) / (1 - z_j^2) for interior cardinal
    polynomials l_j: each vanishes with its slope at both walls, and nodal
    values of the expansion coincide with phi at the interior points.  With
    phi = (1 - z^2) q the derivatives follow from the product rule:

        phi''   = (1-z^2) q''  - 4 z q'   - 2 q
        phi'''' = (1-z^2) q'''' - 8 z q''' - 12 q''
    """
    z = grid.points
    n = grid.n
    d3 = grid.d1 @ grid.d2
    w2 = 1.0 - z * z
    eye = np.eye(n + 1)
    e2 = w2[:, None] * grid.d2 - 4.0 * z[:, None] * grid.d1 - 2.0 * eye
    e4 = w2[:, None] * grid.d4 - 8.0 * z[:, None] * d3 - 12.0 * grid.d2
    s = 1.0 / w2[1:n]
    m2 = e2[1:n, 1:n] * s[None, :]
    m4 = e4[1:n, 1:n] * s[None, :]
    return m2, m4


def assemble(
    profile: VelocityProfile, params: FlowParameters, grid: SpectralGrid
) -> tuple[np.ndarray, np.ndarray]:
    """Assemble the interior pencil (A, B) with A phi = c B phi.

    A = diag(U)(D^2 - a^2) - diag(U'' - b) - (D^2 - a^2)^2/(i a R) and
    B = D^2 - a^2 on the clamped basis.  The b-shift joins as the final
    diagonal addition so assemblies at different b differ exactly by
    (b - b') Id, and B never depends on the Reynolds number.
    """
    alpha, reynolds, beta = params.alpha, params.reynolds, params.beta
    m2, m4 = _clamped_blocks(grid)
    m = grid.n - 1
    eye = np.eye(m)
    u, _, d2u = sample_profile(profile, grid.points)
    helm = m2 - alpha**2 * eye
    visc = (m4 - 2.0 * alpha**2 * m2 + alpha**4 * eye) / (1j * alpha * reynolds)
    a = u[1:-1, None] * helm - np.diag(d2u[1:-1]) - visc
    a = a + beta * eye
    return a, helm.astype(complex)


def _row_scaled(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale pencil rows by powers of two (exact; eigenvalues unchanged).

    The fourth-derivative rows dwarf the rest of the pencil by many orders of
    magnitude; balancing rows keeps the QZ backward error commensurate with
    each row instead of with the global norm.
    """
    mags = np.maximum(np.abs(a).max(axis=1), np.abs(b).max(axis=1))
    mags[mags == 0.0] = 1.0
    s = np.exp2(-np.round(np.log2(mags)))
    return a * s[:, None], b * s[:, None]


def clamped_derivative(grid: SpectralGrid, phi: np.ndarray) -> np.ndarray:
    """d(phi)/dz through the clamped representation phi = (1 - z^2) q.

    Because (1 - z^2) and q both vanish at the walls, the returned derivative
    is exactly zero there, matching the wall constraints the discretization
    builds in.
    """
    phi = np.asarray(phi)
    z = grid.points
    q = np.zeros_like(phi)
    q[1:-1] = phi[1:-1] / (1.0 - z[1:-1] ** 2)
    return (1.0 - z * z) * (grid.d1 @ q) - 2.0 * z * q


def _finite_eigs(a, b, want_vectors):
    try:
        if want_vectors:
            w, v = scipy.linalg.eig(a, b)
        else:
            w = scipy.linalg.eigvals(a, b)
            v = None
    except scipy.linalg.LinAlgError as exc:
        diag = ""
        try:
            diag = f" (cond A ~ {np.linalg.cond(a):.2e}, cond B ~ {np.linalg.cond(b):.2e})"
        except Exception:
            pass
        raise EigensolverError(f"generalized eigendecomposition failed{diag}") from exc
    ok = np.isfinite(w)
    if v is not None:
        return w[ok], v[:, ok]
    return w[ok], None


def solve_spectrum(
    profile: VelocityProfile,
    params: FlowParameters,
    n: int = DEFAULT_N,
    *,
    agree_tol: float = DEFAULT_AGREE_TOL,
    refine_ratio: float = DEFAULT_REFINE_RATIO,
) -> list[Eigenpair]:
    """Solve the full spectrum at resolution ``n``, least stable first.

    Every finite generalized eigenvalue is returned.  Spurious modes are
    flagged by re-solving at ``round(refine_ratio * n)`` points and marking
    converged those eigenvalues that reappear within ``agree_tol`` (absolute).
    Eigenfunctions are mapped back to the full grid, rescaled to unit energy
    norm I1^2 + alpha^2 I0^2, and phase-fixed so the largest-magnitude sample
    is real positive.
    """
    if n < 32:
        raise ValueError(f"spectrum solve needs n >= 32; got {n}")
    grid = build_grid(n)
    a, b = assemble(profile, params, grid)
    w, v = _finite_eigs(*_row_scaled(a, b), want_vectors=True)

    n2 = int(round(refine_ratio * n))
    grid2 = build_grid(n2)
    a2, b2 = assemble(profile, params, grid2)
    w2, _ = _finite_eigs(*_row_scaled(a2, b2), want_vectors=False)

    if w2.size:
        drift = np.array([np.min(np.abs(c - w2)) for c in w])
    else:
        drift = np.full(w.shape, np.inf)
    a_norm = np.linalg.norm(a, 2)

    pairs: list[Eigenpair] = []
    for k in range(w.size):
        vec = v[:, k]
        resid = float(
            np.linalg.norm(a @ vec - w[k] * (b @ vec))
            / (a_norm * np.linalg.norm(vec))
        )
        phi = np.zeros(n + 1, dtype=complex)
        phi[1:-1] = vec
        i0sq, i1sq = norm_integrals(phi, params.alpha, grid)
        phi /= math.sqrt(i1sq + params.alpha**2 * i0sq)
        peak = phi[int(np.argmax(np.abs(phi)))]
        phi *= np.conj(peak) / abs(peak)
        phi.setflags(write=False)
        pairs.append(
            Eigenpair(
                c=complex(w[k]),
                phi=phi,
                residual=resid,
                converged=bool(drift[k] < agree_tol),
                drift=float(drift[k]),
            )
        )
    pairs.sort(key=lambda p: (-p.c.imag, p.c.real))
    if pairs and not any(p.converged for p in pairs):
        warnings.warn(
            f"no modes converged at n={n} (agree_tol={agree_tol:g}); "
            "spectrum is unresolved",
            stacklevel=2,
        )
    return pairs
