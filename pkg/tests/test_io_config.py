import json
import os

import numpy as np
import pytest

from bohmstar.cohen import cohen_transform, marginals
from bohmstar.config import OUTPUT_ENV, SCHEMA, load_config, parse_config
from bohmstar.errors import BoundaryDecayViolated, ConfigError
from bohmstar.grids import PhaseSpaceGrid, SpatialGrid, make_gaussian, GaussianPacketParams
from bohmstar.io import (atomic_write, distribution_csv, fmt, kernel_samples_csv, read_kernel_samples,
                         read_state, wavefunction_csv, write_distribution, write_json, write_marginals)
from bohmstar.kernels import STANDARD, WIGNER


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, -2.5e-300, 1e22):
        assert float(fmt(v)) == v
        assert len(fmt(v).replace("-", "").replace(".", "").split("e")[0]) <= 17


def test_atomic_write_replaces_and_creates_dirs(tmp_path):
    p = tmp_path / "a" / "b.txt"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    assert [f for f in os.listdir(p.parent) if f.startswith(".tmp-")] == []


def test_json_is_deterministic(tmp_path):
    obj = {"b": np.float64(1.5), "a": [np.int64(2), 1 + 2j], "c": np.bool_(True), "d": float("nan")}
    write_json(tmp_path / "x.json", obj)
    first = (tmp_path / "x.json").read_bytes()
    write_json(tmp_path / "x.json", obj)
    assert (tmp_path / "x.json").read_bytes() == first
    d = json.loads(first)
    assert list(d) == ["a", "b", "c", "d"] and d["a"][1] == [1.0, 2.0] and d["d"] == "nan"


def test_distribution_files(tmp_path):
    g = SpatialGrid(-8, 8, 32)
    psi = make_gaussian(GaussianPacketParams(0.6), g)
    F = cohen_transform(psi, WIGNER)
    csv, meta = write_distribution(str(tmp_path / "w"), F, "test")
    rows = open(csv).read().splitlines()
    assert rows[0] == "x,p,re,im" and len(rows) == 1 + 32 * 32
    x, p, re, im = (float(v) for v in rows[1 + 5 * 32 + 7].split(","))
    assert x == F.x[5] and p == F.p[7] and re == F.values[5, 7].real
    m = json.load(open(meta))
    assert m["kernel_tag"] == "wigner" and m["generated_by"] == "test" and m["grid"]["n"] == 32
    assert distribution_csv(F) == open(csv).read()


def test_marginals_file(tmp_path):
    g = SpatialGrid(-8, 8, 32)
    psi = make_gaussian(GaussianPacketParams(0.6), g)
    rep = marginals(cohen_transform(psi, STANDARD), psi)
    write_marginals(tmp_path / "m.csv", rep, psi.density)
    rows = (tmp_path / "m.csv").read_text().splitlines()
    assert rows[0] == "axis,coord,value,reference" and len(rows) == 65
    assert rows[-1].startswith("p,") and rows[-1].endswith(",")


def test_state_round_trip(tmp_path):
    g = SpatialGrid(-14, 14, 64)
    psi = make_gaussian(GaussianPacketParams(1.0, 0.5, 0.3), g)
    path = tmp_path / "s.csv"
    path.write_text(wavefunction_csv(psi))
    back = read_state(path, g, psi.constants)
    assert np.array_equal(back.values, psi.values)
    with pytest.raises(ConfigError):
        read_state(path, SpatialGrid(-14, 14, 128), psi.constants)
    path.write_text("x,re,im\n" + "".join(f"{fmt(x)},1.0,0.0\n" for x in g.x))
    with pytest.raises(BoundaryDecayViolated):
        read_state(path, g, psi.constants)


def test_kernel_samples_round_trip(tmp_path):
    g = PhaseSpaceGrid(SpatialGrid(-4, 4, 8))
    vals = STANDARD.evaluate(g)
    path = tmp_path / "k.csv"
    path.write_text(kernel_samples_csv(vals, g))
    np.testing.assert_array_equal(read_kernel_samples(path, g), vals)
    with pytest.raises(ConfigError):
        read_kernel_samples(path, PhaseSpaceGrid(SpatialGrid(-4, 4, 16)))
    path.write_text("a,b\n")
    with pytest.raises(ConfigError):
        read_kernel_samples(path, g)


def test_parse_config():
    cfg = parse_config("# comment\ngrid.x_min = -10\ngrid.x_max = 10 # trailing\n"
                       "grid.n = 128\nkernels = wigner, bornjordan\noutput.wavefunctions = yes\n")
    assert cfg["grid.n"] == 128 and cfg["grid.x_min"] == -10.0
    assert cfg["kernels"] == ["wigner", "bornjordan"] and cfg["output.wavefunctions"] is True
    assert cfg["hbar"] == SCHEMA["hbar"][1]
    cfg.require("grid.n")


@pytest.mark.parametrize("text", ["grid.n 128", "bogus = 1", "grid.n = many", "output.wavefunctions = maybe"])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_required_keys_are_named():
    with pytest.raises(ConfigError, match="grid.x_max"):
        parse_config("grid.x_min = 0").require("grid.x_min", "grid.x_max")


def test_precedence(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("output.dir = from_file\nhbar = 0.5\n")
    assert load_config(p, env={})["output.dir"] == "from_file"
    assert load_config(p, env={OUTPUT_ENV: "from_env"})["output.dir"] == "from_env"
    cfg = load_config(p, ["output.dir=from_cli", "hbar=2"], env={OUTPUT_ENV: "from_env"})
    assert cfg["output.dir"] == "from_cli" and cfg["hbar"] == 2.0
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg", env={})
    with pytest.raises(ConfigError):
        load_config(None, ["novalue"], env={})
