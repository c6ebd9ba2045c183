import json
import os

import numpy as np
import pytest
from hypothesis import settings

from bohmstar.bohm import polar_decompose
from bohmstar.grids import GaussianPacketParams, PhysicalConstants, SpatialGrid, make_gaussian

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def golden(name):
    with open(os.path.join(GOLDEN, name), encoding="utf-8") as fh:
        return json.load(fh)


def as_complex(v):
    return complex(v["re"], v["im"])


@pytest.fixture(scope="session")
def grid():
    return SpatialGrid(-20.0, 20.0, 256)


@pytest.fixture(scope="session")
def unit():
    return PhysicalConstants()


@pytest.fixture(scope="session")
def packets(grid, unit):
    """Gaussian fixture (sigma0 = 1, p0 = 1) at t = 0, 1, 2."""
    return {t: make_gaussian(GaussianPacketParams(1.0, 1.0, float(t)), grid, unit)
            for t in (0, 1, 2)}


@pytest.fixture(scope="session")
def polar(packets):
    return {t: polar_decompose(psi) for t, psi in packets.items()}


@pytest.fixture(scope="session")
def cat_state(grid, unit):
    """Superposition of two displaced packets (not nodeless)."""
    from bohmstar.grids import wavefunction
    x = grid.x
    v = np.exp(-(x - 3) ** 2 / 2) + np.exp(-(x + 3) ** 2 / 2)
    return wavefunction(grid, v, unit)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(RESULTS):
            terminalreporter.write_line(line)
