import numpy as np
import pytest

from bohmstar.grids import GaussianPacketParams, SpatialGrid, make_gaussian
from bohmstar.oracles import (golden_gaussian, load_golden, oracle_ambiguity_quadrature, oracle_ordering,
                              oracle_wigner_quadrature, write_golden)
from bohmstar.symbols import I, ONE, P, X


def test_fourier_series_reproduces_samples():
    g = SpatialGrid(-12, 12, 64)
    psi = make_gaussian(GaussianPacketParams(1.0, 0.5, 0.5), g)
    r = oracle_wigner_quadrature(psi, 0.0, 0.5, y_max=20.0, n_y=2001)
    ref = oracle_wigner_quadrature(golden_gaussian(0.5, psi.constants, 1.0, 0.5).psi, 0.0, 0.5, 1.0,
                                   y_max=20.0, n_y=2001)
    assert abs(r.value - ref.value) < 1e-12
    assert r.resolution["fourier_modes"] == 64


def test_quadrature_resolution_converges():
    gg = golden_gaussian(0.0, p0=0.0)
    coarse = oracle_wigner_quadrature(gg.psi, 0.3, 0.2, 1.0, y_max=30.0, n_y=301).value
    fine = oracle_wigner_quadrature(gg.psi, 0.3, 0.2, 1.0, y_max=30.0, n_y=3001).value
    assert abs(fine - gg.wigner(0.3, 0.2)) < 1e-12
    assert abs(coarse - fine) < 1e-6


def test_ambiguity_quadrature_origin_is_norm():
    gg = golden_gaussian(1.0, p0=1.0)
    r = oracle_ambiguity_quadrature(gg.psi, 0.0, 0.0, 1.0, (-20.0, 20.0), 4001)
    assert abs(r.value - 1) < 1e-12


@pytest.mark.parametrize("ordering", ["standard", "antistandard", "weyl"])
def test_ordering_of_xp(ordering):
    expected = {"standard": X * P, "antistandard": X * P + I, "weyl": X * P + I / 2}[ordering]
    assert oracle_ordering(1, 1, ordering) == expected


def test_ordering_with_other_hbar():
    assert oracle_ordering(0, 0, "standard", hbar=2, word="px") == X * P - I * 2


def test_ordering_rejects_unknown():
    with pytest.raises(ValueError):
        oracle_ordering(1, 1, "normal")


def test_golden_gaussian_consistency():
    gg = golden_gaussian(1.5, p0=0.7)
    x = np.linspace(-4, 6, 11)
    np.testing.assert_allclose(np.abs(gg.psi(x)), gg.R(x), atol=1e-15)
    assert abs(gg.sigma() - np.sqrt(1 + 1.5**2 / 4)) < 1e-15


def test_golden_files(tmp_path):
    p = tmp_path / "g.json"
    write_golden(p, "demo", {"a": 1}, {"v": 1 + 2j, "arr": np.arange(3)}, {"n": np.int64(5)})
    doc = load_golden(p)
    assert doc["outputs"]["v"] == {"re": 1.0, "im": 2.0} and doc["outputs"]["arr"] == [0, 1, 2]
    p.write_text("{}")
    with pytest.raises(ValueError):
        load_golden(p)
