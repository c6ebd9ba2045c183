"""Deterministic file output (CSV and JSON) and input readers.

Floats are written with ``repr``, the shortest string that round-trips
(at most 17 significant digits).  Files are written to a temporary name
and renamed, so a failed run never leaves a partial file behind.
"""

import json
import os
import tempfile

import numpy as np

from .errors import ConfigError
from .grids import WaveFunction, normalize


def fmt(v):
    return repr(float(v))


def atomic_write(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else str(v)
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    return v


def write_json(path, obj):
    return atomic_write(path, json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")


def distribution_csv(F):
    rows = ["x,p,re,im"]
    x, p = F.grid.x, F.grid.p
    for i in range(x.size):
        xi = fmt(x[i])
        for j in range(p.size):
            v = F.values[i, j]
            rows.append(f"{xi},{fmt(p[j])},{fmt(v.real)},{fmt(v.imag)}")
    return "\n".join(rows) + "\n"


def write_distribution(stem, F, generated_by):
    """Write ``stem.csv`` and the companion ``stem.json``."""
    atomic_write(f"{stem}.csv", distribution_csv(F))
    meta = F.describe()
    meta["generated_by"] = generated_by
    write_json(f"{stem}.json", meta)
    return f"{stem}.csv", f"{stem}.json"


def write_marginals(path, report, psi=None, phi=None):
    rows = ["axis,coord,value,reference"]
    for axis, coords, vals, ref in (("x", report.x, report.position, psi),
                                    ("p", report.p, report.momentum, phi)):
        for k in range(coords.size):
            r = "" if ref is None else fmt(ref[k])
            rows.append(f"{axis},{fmt(coords[k])},{fmt(vals[k].real)},{r}")
    return atomic_write(path, "\n".join(rows) + "\n")


def wavefunction_csv(psi):
    rows = ["x,re,im"]
    for x, v in zip(psi.grid.x, psi.values):
        rows.append(f"{fmt(x)},{fmt(v.real)},{fmt(v.imag)}")
    return "\n".join(rows) + "\n"


def _read_table(path, header):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].replace(" ", "") != header:
        raise ConfigError(f"{path}: expected header {header!r}")
    try:
        return np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def read_state(path, grid, constants):
    """Sampled state from a ``x,re,im`` CSV whose x column matches ``grid``."""
    data = _read_table(path, "x,re,im")
    if data.shape != (grid.n, 3) or not np.allclose(data[:, 0], grid.x, rtol=0, atol=1e-9 * grid.dx):
        raise ConfigError(f"{path}: x column does not match the configured grid")
    psi = normalize(WaveFunction(grid, data[:, 1] + 1j * data[:, 2], constants))
    return psi.check_boundary_decay()


def read_kernel_samples(path, psgrid):
    """Custom kernel samples from a ``xi,eta,re,im`` CSV (xi outer)."""
    data = _read_table(path, "xi,eta,re,im")
    n, n_p = psgrid.shape
    if data.shape != (n * n_p, 4):
        raise ConfigError(f"{path}: need {n * n_p} rows for the dual grid, got {data.shape[0]}")
    xi = data[:, 0].reshape(n, n_p)
    eta = data[:, 1].reshape(n, n_p)
    if not (np.allclose(xi, psgrid.xi[:, None], atol=1e-9) and np.allclose(eta, psgrid.y[None, :], atol=1e-9)):
        raise ConfigError(f"{path}: sample points do not match the dual grid")
    return (data[:, 2] + 1j * data[:, 3]).reshape(n, n_p)


def kernel_samples_csv(samples, psgrid):
    rows = ["xi,eta,re,im"]
    for i, xi in enumerate(psgrid.xi):
        for j, eta in enumerate(psgrid.y):
            v = samples[i, j]
            rows.append(f"{fmt(xi)},{fmt(eta)},{fmt(v.real)},{fmt(v.imag)}")
    return "\n".join(rows) + "\n"
