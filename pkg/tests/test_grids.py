import numpy as np
import pytest

from bohmstar.errors import BoundaryDecayViolated, ZeroField
from bohmstar.grids import (GaussianPacketParams, PhaseSpaceGrid, PhysicalConstants,
                            SpatialGrid, WaveFunction, from_momentum, l2_norm, make_gaussian,
                            normalize, to_momentum, wavefunction)
from bohmstar.oracles import golden_gaussian


def test_grid_validation():
    with pytest.raises(ValueError):
        SpatialGrid(1.0, 0.0, 64)
    with pytest.raises(ValueError):
        SpatialGrid(0.0, 1.0, 100)
    with pytest.raises(ValueError):
        PhysicalConstants(hbar=0.0)
    with pytest.raises(ValueError):
        GaussianPacketParams(sigma0=-1.0)


def test_phase_space_grid_layout(grid):
    g = PhaseSpaceGrid(grid, 0.5)
    assert g.shape == (256, 256)
    assert np.isclose(g.dy, grid.dx / 0.5)
    assert np.isclose(g.dp * g.dy * g.n_p, 2 * np.pi)
    assert g.p[g.n_p // 2] == 0.0 and g.y[g.n_p // 2] == 0.0
    np.testing.assert_allclose(g.p, grid.momenta(0.5))


def test_gaussian_at_origin_density(grid, unit):
    psi = make_gaussian(GaussianPacketParams(1.0, 0.0, 0.0), grid, unit)
    assert np.isclose(psi.density[128], (2 * np.pi) ** -0.5, rtol=1e-14)
    np.testing.assert_allclose(psi.density[1:], psi.density[1:][::-1], atol=1e-16)
    assert abs(psi.norm() - 1) < 1e-12


def test_gaussian_spreads_with_width_of_s_t(packets, grid):
    psi = packets[2]
    x = grid.x
    mean = np.sum(x * psi.density) * grid.dx
    var = np.sum((x - mean) ** 2 * psi.density) * grid.dx
    s_t = 1.0 * (1 + 1j * 2 / 2)
    assert abs(mean - 2.0) < 1e-12
    assert abs(np.sqrt(var) - abs(s_t)) < 1e-12
    assert abs(abs(s_t) - np.sqrt(2)) < 1e-15


def test_make_gaussian_matches_golden_closed_form(packets, grid, unit):
    for t, psi in packets.items():
        gg = golden_gaussian(t, unit, 1.0, 1.0)
        np.testing.assert_allclose(psi.values, gg.psi(grid.x), atol=1e-15)


def test_packet_too_wide_raises(unit):
    with pytest.raises(BoundaryDecayViolated):
        make_gaussian(GaussianPacketParams(3.0), SpatialGrid(-5, 5, 64), unit)


def test_normalize(packets, grid):
    psi = packets[1]
    assert np.allclose(normalize(psi.replace(2 * psi.values)).values, psi.values, atol=1e-15)
    assert np.array_equal(normalize(psi).values, psi.values) or \
        np.max(np.abs(normalize(psi).values - psi.values)) < 1e-15
    with pytest.raises(ZeroField):
        normalize(WaveFunction(grid, np.zeros(grid.n)))


def test_momentum_round_trip_and_parseval(packets, grid):
    for psi in packets.values():
        phi = to_momentum(psi)
        assert abs(phi.norm() - psi.norm()) < 1e-13
        back = from_momentum(phi, grid, psi.constants)
        assert np.max(np.abs(back.values - psi.values)) <= 1e-12 * np.max(np.abs(psi.values))


def test_momentum_of_gaussian_is_centred(grid, unit):
    psi = make_gaussian(GaussianPacketParams(1.0, 0.0, 0.0), grid, unit)
    phi = to_momentum(psi)
    # closed form (2/pi)^(1/4) exp(-p^2) for sigma0 = hbar = 1
    np.testing.assert_allclose(phi.values, (2 / np.pi) ** 0.25 * np.exp(-phi.p ** 2), atol=1e-14)


def test_shift_theorem(grid, unit):
    base = make_gaussian(GaussianPacketParams(1.0, 0.0, 0.0), grid, unit)
    dp = grid.dp(1.0)
    k = 5
    boosted = base.replace(base.values * np.exp(1j * k * dp * grid.x))
    a, b = to_momentum(base).values, to_momentum(boosted).values
    np.testing.assert_allclose(np.abs(b[k:]), np.abs(a[:-k]), atol=1e-14)


def test_doubling_resolution_keeps_norm(unit):
    for t in (0.0, 1.0, 2.0):
        params = GaussianPacketParams(1.0, 1.0, t)
        n1 = make_gaussian(params, SpatialGrid(-20, 20, 256), unit).norm()
        n2 = make_gaussian(params, SpatialGrid(-20, 20, 512), unit).norm()
        assert abs(n1 - n2) <= 1e-10


def test_wavefunction_is_immutable(packets):
    with pytest.raises(ValueError):
        packets[0].values[0] = 1.0


def test_digest_changes_with_values(packets):
    assert packets[0].digest() != packets[1].digest()
    assert packets[0].digest() == packets[0].replace(packets[0].values).digest()


def test_wavefunction_builder_normalises(grid, unit):
    psi = wavefunction(grid, 3 * np.exp(-grid.x ** 2), unit)
    assert abs(l2_norm(psi) - 1) < 1e-14
