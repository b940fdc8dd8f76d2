"""Shared fixtures: canonical materials and a memoized flutter runner."""

import functools

import pytest

from fgmflutter import ConstituentSet, FGMSection, PlateCase, run_case
from fgmflutter.materials import isotropic_constituent


def make_isotropic_section(E=70e9, nu=0.3, rho=2700.0, h=0.01, alpha=0.0,
                           **kwargs):
    mat = isotropic_constituent("iso", E, nu, rho, alpha=alpha)
    return FGMSection(constituents=ConstituentSet(mat, mat), n=0.0, h=h,
                      **kwargs)


@functools.lru_cache(maxsize=None)
def _cached_run(case: PlateCase, lambda_bar_max: float, n_steps: int,
                damped: bool, g_bar: float, basis_size):
    return run_case(case, lambda_bar_max=lambda_bar_max, n_steps=n_steps,
                    damped=damped, g_bar=g_bar, basis_size=basis_size)


def run_cached(case: PlateCase, lambda_bar_max=1000.0, n_steps=200,
               damped=False, g_bar=8.0, basis_size=None) -> dict:
    """Memoized run_case; PlateCase is frozen/hashable so repeats are free."""
    return _cached_run(case, lambda_bar_max, n_steps, damped, g_bar,
                       basis_size)


@pytest.fixture
def iso_section():
    return make_isotropic_section()
