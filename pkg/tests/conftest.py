"""Shared solver fixtures.

Ground states are expensive enough to share per session; everything here is
deterministic, so sharing cannot couple tests.
"""

import pytest

from anls import Grid2D, ModelParams, petviashvili_solve


@pytest.fixture(scope="session")
def g40():
    return Grid2D(256, 256, 40.0, 40.0)


@pytest.fixture(scope="session")
def gs4(g40):
    """p = 4, omega = 1 ground state on the default box."""
    return petviashvili_solve(ModelParams(p=4.0, omega=1.0), g40, tol=1e-8)


@pytest.fixture(scope="session")
def gs3(g40):
    """p = 3, omega = 1 ground state on the default box."""
    return petviashvili_solve(ModelParams(p=3.0, omega=1.0), g40, tol=1e-8)


@pytest.fixture(scope="session")
def gs5_wide():
    """p = 5 profile on an oblong box that holds the slow y-tail."""
    return petviashvili_solve(ModelParams(p=5.0, omega=1.0),
                              Grid2D(256, 512, 64.0, 80.0), tol=1e-8)


@pytest.fixture(scope="session")
def gs5_fine():
    """p = 5 profile with the finer x-grid needed to dilate the datum."""
    return petviashvili_solve(ModelParams(p=5.0, omega=1.0),
                              Grid2D(512, 512, 64.0, 80.0), tol=1e-8)
