"""Shared fixtures: grids, profiles, and a memoized spectrum solver."""

from __future__ import annotations

from functools import lru_cache

import pytest

from betaos import FlowParameters, build_grid, builtin_profile, solve_spectrum


@pytest.fixture(scope="session")
def grid32():
    return build_grid(32)


@pytest.fixture(scope="session")
def grid64():
    return build_grid(64)


@pytest.fixture(scope="session")
def grid128():
    return build_grid(128)


@lru_cache(maxsize=None)
def cached_solve(profile_name, alpha, reynolds, beta, n, agree_tol=1e-6, kappa=1.0):
    """Memoized solve so expensive spectra are shared across test modules."""
    profile = builtin_profile(profile_name, kappa=kappa)
    params = FlowParameters(alpha=alpha, reynolds=reynolds, beta=beta)
    return tuple(solve_spectrum(profile, params, n, agree_tol=agree_tol))


@pytest.fixture(scope="session")
def solve():
    return cached_solve
