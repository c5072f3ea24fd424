"""Viscous parallel shear-flow stability on the beta plane.

Spectral (Chebyshev collocation) eigensolver for the clamped fourth-order
stability problem, plus a verification layer that evaluates the energy
integrals of each computed mode and certifies every eigenvalue against the
closed-form identities and bounds they must satisfy.
"""

from .bounds import (
    BoundCertificate,
    CrCase,
    InequalityCheck,
    certify,
    ci_upper_bound,
    cr_band,
    stability_threshold,
)
from .eigensolver import (
    Eigenpair,
    EigensolverError,
    FlowParameters,
    assemble,
    clamped_derivative,
    solve_spectrum,
)
from .functionals import (
    EnergyFunctionals,
    IdentityReport,
    energy_integrals,
    norm_integrals,
    verify_identities,
)
from .profiles import (
    UnknownProfileError,
    VelocityProfile,
    builtin_names,
    builtin_profile,
    load_profile,
    profile_from_csv,
    profile_from_table,
    sample_profile,
)
from .spectral import SpectralGrid, build_grid, integrate, interpolation_matrix

__version__ = "0.1.0"

__all__ = [
    "BoundCertificate",
    "CrCase",
    "Eigenpair",
    "EigensolverError",
    "EnergyFunctionals",
    "FlowParameters",
    "IdentityReport",
    "InequalityCheck",
    "SpectralGrid",
    "UnknownProfileError",
    "VelocityProfile",
    "assemble",
    "build_grid",
    "builtin_names",
    "builtin_profile",
    "certify",
    "ci_upper_bound",
    "clamped_derivative",
    "cr_band",
    "energy_integrals",
    "integrate",
    "interpolation_matrix",
    "load_profile",
    "norm_integrals",
    "profile_from_csv",
    "profile_from_table",
    "sample_profile",
    "solve_spectrum",
    "stability_threshold",
    "verify_identities",
    "__version__",
]
