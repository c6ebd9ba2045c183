"""Regenerate the golden data files from the slow oracles.

Run from the repository root:  python3 tests/golden/make_golden.py
"""

import os

import numpy as np

from bohmstar.grids import GaussianPacketParams, PhysicalConstants, SpatialGrid, make_gaussian
from bohmstar.oracles import (golden_gaussian, oracle_ambiguity_quadrature, oracle_ordering,
                              oracle_wigner_quadrature, write_golden)
from bohmstar.symbols import format_symbol

HERE = os.path.dirname(os.path.abspath(__file__))
GRID = SpatialGrid(-20.0, 20.0, 256)
UNIT = PhysicalConstants()


def wigner_origin():
    out = {}
    for p0 in (0.0, 1.0):
        gg = golden_gaussian(0.0, UNIT, 1.0, p0)
        r = oracle_wigner_quadrature(gg.psi, 0.0, p0, 1.0, y_max=40.0, n_y=8001)
        out[f"p0={p0}"] = r.value
    write_golden(os.path.join(HERE, "wigner_gaussian_origin.json"), "wigner_quadrature",
                 {"sigma0": 1.0, "p0": [0.0, 1.0], "t": 0.0, "hbar": 1.0, "mass": 1.0,
                  "point": "(0, p0)"}, out, r.resolution)


def wigner_points():
    psi = make_gaussian(GaussianPacketParams(1.0, 1.0, 1.0), GRID, UNIT)
    rng = np.random.default_rng(20240501)
    ix = rng.integers(96, 176, 25)
    ip = rng.integers(96, 176, 25)
    p = GRID.momenta(1.0)
    vals = []
    for i, j in zip(ix, ip):
        r = oracle_wigner_quadrature(psi, GRID.x[i], p[j], y_max=40.0, n_y=8001)
        vals.append(r.value)
    write_golden(os.path.join(HERE, "wigner_points.json"), "wigner_quadrature",
                 {"grid": GRID.as_dict(), "sigma0": 1.0, "p0": 1.0, "t": 1.0,
                  "x_index": ix, "p_index": ip}, {"values": vals}, r.resolution)


def ambiguity_points():
    gg = golden_gaussian(0.0, UNIT, 1.0, 0.0)
    pts = [(0.0, 0.0), (0.5, 0.0), (0.0, 1.0), (1.0, -2.0), (-1.5, 0.5)]
    vals = [oracle_ambiguity_quadrature(gg.psi, xi, eta, 1.0, (-20.0, 20.0), 8001).value
            for xi, eta in pts]
    write_golden(os.path.join(HERE, "ambiguity_gaussian.json"), "ambiguity_quadrature",
                 {"sigma0": 1.0, "p0": 0.0, "t": 0.0, "points": pts},
                 {"values": vals}, {"x_range": [-20.0, 20.0], "n_x": 8001})


def orderings():
    rows = []
    for m in range(4):
        for n in range(4):
            for ordering in ("standard", "antistandard", "weyl"):
                rows.append({"m": m, "n": n, "ordering": ordering,
                             "symbol": format_symbol(oracle_ordering(m, n, ordering))})
    for word in ("px", "pxp", "xpx", "pxxp"):
        rows.append({"word": word, "ordering": "weyl",
                     "symbol": format_symbol(oracle_ordering(0, 0, "weyl", word=word))})
    write_golden(os.path.join(HERE, "ordering.json"), "ordering", {"hbar": 1},
                 {"rows": rows}, {"exact": True})


def gaussian_closed_forms():
    x = [-3.0, -1.0, 0.0, 0.5, 2.0]
    out = {}
    for t in (0.0, 1.0, 2.0):
        gg = golden_gaussian(t, UNIT, 1.0, 1.0)
        out[f"t={t}"] = {"Q": gg.quantum_potential(x), "dS": gg.dS(x),
                         "S": gg.S(x), "sigma": float(gg.sigma())}
    x0 = [-1.0, 0.0, 1.5]
    ts = [0.0, 0.5, 1.0, 2.0]
    gg = golden_gaussian(0.0, UNIT, 1.0, 1.0)
    out["trajectories"] = [[float(gg.trajectory(a, t)) for a in x0] for t in ts]
    write_golden(os.path.join(HERE, "gaussian_closed_forms.json"), "golden_gaussian",
                 {"sigma0": 1.0, "p0": 1.0, "hbar": 1.0, "mass": 1.0, "x": x,
                  "x0": x0, "t": ts}, out, {"closed_form": True})


if __name__ == "__main__":
    wigner_origin()
    wigner_points()
    ambiguity_points()
    orderings()
    gaussian_closed_forms()
