"""Flat, typed ``key = value`` run configuration.

Grammar (one entry per line)::

    # comment
    grid.x_min = -20
    grid.n     = 256
    kernels    = wigner, standard

Blank lines and ``#`` comments are ignored.  Lists are comma separated.
Every key must appear in :data:`SCHEMA`; unknown keys are rejected.
"""

from dataclasses import dataclass, field
import os

from .errors import ConfigError

OUTPUT_ENV = "BOHMSTAR_OUTPUT_DIR"


def _float_list(s):
    return [float(v) for v in s.split(",") if v.strip()]


def _str_list(s):
    return [v.strip() for v in s.split(",") if v.strip()]


def _bool(s):
    low = s.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


# key -> (parser, default); a default of None means "no default"
SCHEMA = {
    "grid.x_min": (float, None),
    "grid.x_max": (float, None),
    "grid.n": (int, None),
    "grid.n_p": (int, None),
    "hbar": (float, 1.0),
    "mass": (float, 1.0),
    "state.kind": (str, "gaussian"),
    "state.sigma0": (float, 1.0),
    "state.p0": (float, 0.0),
    "state.t": (float, 0.0),
    "state.x0": (float, 0.0),
    "state.file": (str, None),
    "kernel": (str, "wigner"),
    "kernel.file": (str, None),
    "kernels": (_str_list, ["wigner", "standard", "antistandard", "bornjordan"]),
    "potential.kind": (str, "free"),
    "potential.omega": (float, 1.0),
    "potential.a": (float, 0.0),
    "potential.b": (float, 0.0),
    "potential.c": (float, 0.0),
    "dynamics.dt": (float, 1e-3),
    "dynamics.steps": (int, 1000),
    "dynamics.every": (int, 100),
    "trajectories.x0": (_float_list, [-1.0, 0.0, 1.0]),
    "trajectories.t_end": (float, 2.0),
    "trajectories.dt": (float, 1e-2),
    "expansion.hbars": (_float_list, [0.2, 0.1, 0.05, 0.025]),
    "expansion.y_window": (float, 1.0),
    "verify.threshold": (float, 1e-8),
    "verify.corrupt": (float, 0.0),
    "output.dir": (str, "out"),
    "output.wavefunctions": (_bool, False),
}

GRID_KEYS = ("grid.x_min", "grid.x_max", "grid.n")


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key not in SCHEMA:
            raise KeyError(key)
        if key in self.values:
            return self.values[key]
        default = SCHEMA[key][1]
        return list(default) if isinstance(default, list) else default

    def require(self, *keys):
        missing = [k for k in keys if self[k] is None]
        if missing:
            raise ConfigError(f"missing required key(s): {', '.join(missing)}")

    def set(self, key, raw, origin="override"):
        key = key.strip()
        if key not in SCHEMA:
            raise ConfigError(f"unknown configuration key {key!r} ({origin})")
        parser = SCHEMA[key][0]
        try:
            self.values[key] = parser(raw.strip()) if isinstance(raw, str) else raw
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r} ({origin}): {exc}") from exc

    def as_dict(self):
        return {k: self[k] for k in sorted(SCHEMA) if self[k] is not None}


def parse_config(text, origin="<config>"):
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        cfg.set(key, raw, f"{origin}:{lineno}")
    return cfg


def load_config(path=None, overrides=(), env=None):
    """File values, then the output-dir environment variable, then
    ``key=value`` overrides (highest precedence)."""
    if path is None:
        cfg = RunConfig()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = parse_config(fh.read(), os.fspath(path))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    env = os.environ if env is None else env
    if env.get(OUTPUT_ENV):
        cfg.set("output.dir", env[OUTPUT_ENV], OUTPUT_ENV)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        cfg.set(key, raw, "--set")
    return cfg
