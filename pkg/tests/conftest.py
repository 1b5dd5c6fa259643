"""Shared fixtures.  The reference two-material problem (r_i=1, r_o=2, H=8,
interface at 0.5, p=1, n=3) and its full-size series solution are session
scoped: the N_r = N_z = 25 assembly takes ~15 s and is reused across the
solver and acceptance tests."""

from __future__ import annotations

import numpy as np
import pytest

import weldcreep as wc
from weldcreep.stressfn import grid_for_basis


@pytest.fixture(scope="session")
def reference_config():
    return wc.two_material_config(1.0, 2.0, 8.0, 0.5, 1.0, 3.0, s=0.1)


@pytest.fixture(scope="session")
def full_basis(reference_config):
    return wc.enumerate_basis(reference_config, 25, 25)


@pytest.fixture(scope="session")
def full_grid(reference_config):
    return grid_for_basis(reference_config, 25)


@pytest.fixture(scope="session")
def full_correction(reference_config, full_basis, full_grid):
    return wc.solve_linear_correction(reference_config, full_basis, full_grid)


@pytest.fixture(scope="session")
def reference_constants(reference_config):
    return wc.compute_constants(reference_config)


@pytest.fixture(scope="session")
def reference_bvp(reference_config, reference_constants):
    return wc.solve_bvp(reference_constants, reference_config)


@pytest.fixture(scope="session")
def z_line():
    return np.linspace(0.0, 8.0, 1601)
