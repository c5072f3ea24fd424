"""Closed-form eigenvalue bounds and per-mode certificates.

Three families of a-priori statements constrain every eigenvalue of the
clamped stability problem:

* a growth-rate ceiling  c_i <= q/(2a) - (pi^2/4 + a^2)/(a R)  with
  q = max |U'|;
* a sufficient-stability threshold  R* = 2 (pi^2/4 + a^2)/q  below which the
  ceiling is negative, so every mode decays;
* a phase-speed band for c_r whose endpoints shift U_min/U_max by
  4 (U''/2 - b)/(pi^2 + 4 a^2) evaluated at the appropriate extremum of U'',
  with three cases according to the position of b relative to U''_min/2 and
  U''_max/2.

The band endpoints use the sharp Poincare constant pi^2/4 for functions
vanishing at z = +-1.  ``certify`` evaluates all of it, plus the elementary
inequality chain behind the ceiling, on an actual computed eigenpair.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .eigensolver import Eigenpair, FlowParameters
    from .functionals import EnergyFunctionals
    from .profiles import VelocityProfile

__all__ = [
    "CrCase",
    "InequalityCheck",
    "BoundCertificate",
    "ci_upper_bound",
    "stability_threshold",
    "cr_band",
    "certify",
    "BOUND_TOL",
]

PI2_4 = math.pi**2 / 4.0

# discrete eigenfunctions satisfy the continuum bounds only up to truncation
BOUND_TOL = 1e-6


class CrCase(enum.Enum):
    """Which phase-speed band applies, by the position of beta."""

    CASE_I = "case_i"      # beta <= U''_min / 2
    CASE_II = "case_ii"    # U''_min / 2 <= beta <= U''_max / 2
    CASE_III = "case_iii"  # U''_max / 2 <= beta


@dataclass(frozen=True)
class InequalityCheck:
    """One audited inequality, recorded as lhs <= rhs with margin = rhs - lhs."""

    ineq_id: str
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class BoundCertificate:
    """Certificate that one eigenpair satisfies every bound, with margins."""

    ci_ceiling: float
    ci_margin: float
    cr_band: tuple[float, float]
    cr_case: CrCase
    cr_in_band: bool
    audit: tuple[InequalityCheck, ...]
    stability_threshold_R: float


def ci_upper_bound(params: FlowParameters, q: float) -> float:
    """Growth-rate ceiling q/(2a) - (pi^2/4 + a^2)/(a R)."""
    if q < 0.0:
        raise ValueError("q = max|U'| cannot be negative")
    alpha, reynolds = params.alpha, params.reynolds
    return q / (2.0 * alpha) - (PI2_4 + alpha**2) / (alpha * reynolds)


def stability_threshold(alpha: float, q: float) -> float:
    """R* = 2 (pi^2/4 + a^2)/q; the ceiling is negative for all R < R*.

    A uniform flow (q = 0) never has a positive ceiling, so the threshold is
    unbounded: returns +inf.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if q < 0.0:
        raise ValueError("q = max|U'| cannot be negative")
    if q == 0.0:
        return math.inf
    return 2.0 * (PI2_4 + alpha**2) / q


def cr_band(
    profile: VelocityProfile, alpha: float, beta: float
) -> tuple[CrCase, float, float]:
    """Phase-speed band (case, lower, upper) for the given flow and beta.

    The shift G(x) = 4 (x/2 - beta)/(pi^2 + 4 a^2) is applied to U_max with
    x = U''_max (upper end) and to U_min with x = U''_min (lower end); each
    case drops the shift whose sign the case hypothesis pins.  At a case
    boundary the adjacent formulas coincide; ties resolve to the middle case.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    denom = math.pi**2 + 4.0 * alpha**2

    def shift(x: float) -> float:
        return 4.0 * (0.5 * x - beta) / denom

    lo_half = 0.5 * profile.d2u_min
    hi_half = 0.5 * profile.d2u_max
    if lo_half <= beta <= hi_half:
        case = CrCase.CASE_II
        lower = profile.u_min + shift(profile.d2u_min)
        upper = profile.u_max + shift(profile.d2u_max)
    elif beta <= lo_half:
        case = CrCase.CASE_I
        lower = profile.u_min
        upper = profile.u_max + shift(profile.d2u_max)
    else:
        case = CrCase.CASE_III
        lower = profile.u_min + shift(profile.d2u_min)
        upper = profile.u_max
    return case, lower, upper


def certify(
    pair: Eigenpair,
    ef: EnergyFunctionals,
    profile: VelocityProfile,
    params: FlowParameters,
) -> BoundCertificate:
    """Evaluate every bound and the underlying inequality chain on one mode.

    Audit entries record, on the actual eigenfunction, each elementary step
    of the ceiling's derivation: the Schwarz bound on Im Q, the
    arithmetic-geometric mean inequality, the Poincare estimates for the
    dissipation quotient, and the energy-ratio bound they imply.  All are
    stored as lhs <= rhs so margin >= 0 means the inequality holds.
    """
    alpha = params.alpha
    q = profile.q
    i0, i1 = math.sqrt(ef.i0sq), math.sqrt(ef.i1sq)
    den = ef.i1sq + alpha**2 * ef.i0sq
    diss = ef.i2sq + 2.0 * alpha**2 * ef.i1sq + alpha**4 * ef.i0sq

    ceiling = ci_upper_bound(params, q)
    case, lower, upper = cr_band(profile, alpha, params.beta)
    cr = pair.c.real
    audit = (
        InequalityCheck("im_q_schwarz", ef.im_q, q * i1 * i0),
        InequalityCheck("energy_am_gm", 2.0 * alpha * i1 * i0, den),
        InequalityCheck("dissipation_poincare", (PI2_4 + alpha**2) * den, diss),
        InequalityCheck("gradient_poincare", PI2_4 * ef.i0sq, ef.i1sq),
        InequalityCheck(
            "energy_ratio",
            ef.i0sq / den,
            4.0 / (math.pi**2 + 4.0 * alpha**2),
        ),
    )
    return BoundCertificate(
        ci_ceiling=ceiling,
        ci_margin=ceiling - pair.c.imag,
        cr_band=(lower, upper),
        cr_case=case,
        cr_in_band=bool(lower - BOUND_TOL <= cr <= upper + BOUND_TOL),
        audit=audit,
        stability_threshold_R=stability_threshold(alpha, q),
    )
