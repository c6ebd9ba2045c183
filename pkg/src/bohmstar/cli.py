"""Command line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical precondition
violated, 4 verification failed.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import logging
import os
import sys

import numpy as np

from . import __version__
from .bohm import bohmian_trajectories, polar_decompose
from .cohen import cohen_transform, gauge_transform, marginals, mehta, wigner_direct
from .config import GRID_KEYS, load_config
from .dynamics import Potential, split_step_evolve
from .errors import ConfigError, PreconditionError, SymbolParseError, VerificationFailed
from .grids import (GaussianPacketParams, PhaseSpaceGrid, PhysicalConstants, SpatialGrid,
                    make_gaussian, to_momentum)
from .io import (atomic_write, read_kernel_samples, read_state, wavefunction_csv,
                 write_distribution, write_json, write_marginals)
from .kernels import WIGNER, custom_kernel, kernel_by_name
from .star import STAR_KINDS, moyal_bracket, poly_star, symbol_transform
from .symbols import QQi, format_symbol, parse_symbol
from .theorem import hbar_expansion_check, verify_theorem

GENERATED_BY = f"bohmstar {__version__}"

log = logging.getLogger("bohmstar")


# --- configuration helpers --------------------------------------------------

def _grid(cfg):
    cfg.require(*GRID_KEYS)
    try:
        return SpatialGrid(cfg["grid.x_min"], cfg["grid.x_max"], cfg["grid.n"])
    except ValueError as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc


def _constants(cfg):
    try:
        return PhysicalConstants(cfg["hbar"], cfg["mass"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _psgrid(cfg, grid, constants):
    try:
        return PhaseSpaceGrid(grid, constants.hbar, cfg["grid.n_p"])
    except ValueError as exc:
        raise ConfigError(f"invalid momentum grid: {exc}") from exc


def _gaussian_params(cfg, t=None):
    try:
        return GaussianPacketParams(cfg["state.sigma0"], cfg["state.p0"],
                                    cfg["state.t"] if t is None else t, cfg["state.x0"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _state(cfg, grid, constants):
    kind = cfg["state.kind"]
    if kind == "gaussian":
        return make_gaussian(_gaussian_params(cfg), grid, constants)
    if kind == "file":
        cfg.require("state.file")
        return read_state(cfg["state.file"], grid, constants)
    raise ConfigError(f"state.kind must be 'gaussian' or 'file', got {kind!r}")


def _kernel(name, cfg, psgrid):
    if name.lower() == "custom":
        cfg.require("kernel.file")
        samples = read_kernel_samples(cfg["kernel.file"], psgrid)
        return custom_kernel(samples=samples, grid=psgrid, description=cfg["kernel.file"])
    try:
        return kernel_by_name(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _potential(cfg, grid, constants):
    kind = cfg["potential.kind"]
    if kind == "free":
        return Potential.free(grid)
    if kind == "harmonic":
        return Potential.harmonic(grid, cfg["potential.omega"], constants.mass)
    if kind == "quadratic":
        return Potential.polynomial(grid, cfg["potential.a"], cfg["potential.b"], cfg["potential.c"])
    raise ConfigError(f"potential.kind must be free, harmonic or quadratic, got {kind!r}")


def _out(cfg, name):
    return os.path.join(cfg["output.dir"], name)


def _setup(cfg):
    grid = _grid(cfg)
    constants = _constants(cfg)
    return grid, constants, _psgrid(cfg, grid, constants)


# --- commands ---------------------------------------------------------------

def cmd_wigner(cfg, args):
    grid, constants, psgrid = _setup(cfg)
    psi = _state(cfg, grid, constants)
    F = wigner_direct(psi, psgrid)
    write_distribution(_out(cfg, "wigner"), F, GENERATED_BY)
    rep = marginals(F, psi)
    phi = to_momentum(psi).density if psgrid.n_p == grid.n else None
    write_marginals(_out(cfg, "marginals.csv"), rep, psi.density, phi)
    print(f"wigner: norm {F.integral().real:.15f}, marginal errors "
          f"x {rep.position_error:.3e}, p {rep.momentum_error if rep.momentum_error is not None else float('nan'):.3e}")
    return 0


def cmd_mehta(cfg, args):
    grid, constants, psgrid = _setup(cfg)
    psi = _state(cfg, grid, constants)
    F = mehta(psi, psgrid)
    write_distribution(_out(cfg, "mehta"), F, GENERATED_BY)
    print(f"mehta: norm {F.integral().real:.15f}")
    return 0


def cmd_cohen(cfg, args):
    grid, constants, psgrid = _setup(cfg)
    psi = _state(cfg, grid, constants)
    kernel = _kernel(args.kernel or cfg["kernel"], cfg, psgrid)
    F = cohen_transform(psi, kernel, psgrid)
    write_distribution(_out(cfg, f"cohen_{kernel.tag}"), F, GENERATED_BY)
    rep = marginals(F, psi)
    report = {"kernel": kernel.as_dict(), "constraints": list(kernel.constraints),
              "x_marginal_error": rep.position_error, "p_marginal_error": rep.momentum_error,
              "norm": F.integral()}
    try:
        back = gauge_transform(gauge_transform(F, WIGNER), kernel)
        report["gauge_round_trip_linf"] = float(np.max(np.abs(back.values - F.values)))
    except PreconditionError as exc:
        report["gauge_round_trip_linf"] = None
        report["gauge_round_trip_note"] = str(exc)
    write_json(_out(cfg, f"cohen_{kernel.tag}_report.json"), report)
    print(f"cohen[{kernel.tag}]: constraints {kernel.constraints}, "
          f"x-marginal error {rep.position_error:.3e}")
    return 0


def cmd_verify_theorem(cfg, args):
    grid, constants, psgrid = _setup(cfg)
    psi = _state(cfg, grid, constants)
    pf = polar_decompose(psi)
    if cfg["verify.corrupt"]:
        pf = pf.with_phase(pf.S + cfg["verify.corrupt"] * grid.x**3)
    threshold = cfg["verify.threshold"]
    kernels = [_kernel(name, cfg, psgrid) for name in cfg["kernels"]]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        reports = list(pool.map(lambda k: verify_theorem(psi, pf, k, psgrid), kernels))
    failed = []
    for rep in reports:
        write_json(_out(cfg, f"theorem_{rep.kernel}.json"), rep.as_dict())
        status = "skipped" if rep.skipped else ("ok" if rep.passed(threshold) else "FAIL")
        print(f"theorem[{rep.kernel}]: linf {rep.linf:.3e} l2 {rep.l2:.3e} {status}")
        if status == "FAIL":
            failed.append(rep.kernel)
    write_json(_out(cfg, "theorem.json"), {"threshold": threshold,
                                            "reports": [r.as_dict() for r in reports]})
    if failed:
        raise VerificationFailed(f"deviation above {threshold:g} for {', '.join(failed)}")
    return 0


def cmd_evolve(cfg, args):
    grid, constants, psgrid = _setup(cfg)
    psi0 = _state(cfg, grid, constants)
    V = _potential(cfg, grid, constants)
    series = split_step_evolve(psi0, V, cfg["dynamics.dt"], cfg["dynamics.steps"], cfg["dynamics.every"])
    snaps = []
    for k, (t, psi) in enumerate(zip(series.times, series.states)):
        entry = {"index": k, "t": float(t), "norm": psi.norm()}
        rep = marginals(wigner_direct(psi, psgrid), psi)
        entry["x_marginal_error"] = rep.position_error
        entry["p_marginal_error"] = rep.momentum_error
        if V.quadratic == (0.0, 0.0, 0.0) and cfg["state.kind"] == "gaussian":
            exact = make_gaussian(_gaussian_params(cfg, cfg["state.t"] + t), grid, constants)
            entry["closed_form_linf"] = float(np.max(np.abs(exact.values - psi.values)))
        if cfg["output.wavefunctions"]:
            atomic_write(_out(cfg, f"snapshot_{k:04d}.csv"), wavefunction_csv(psi))
        snaps.append(entry)
    write_json(_out(cfg, "evolve.json"), {"stability": series.stability, "snapshots": snaps,
                                          "generated_by": GENERATED_BY})
    last = snaps[-1]
    print(f"evolve: {len(snaps)} snapshots, final norm {last['norm']:.15f}"
          + (f", closed-form error {last['closed_form_linf']:.3e}" if "closed_form_linf" in last else ""))
    return 0


def cmd_trajectories(cfg, args):
    grid, constants, _ = _setup(cfg)
    psi0 = _state(cfg, grid, constants)
    V = _potential(cfg, grid, constants)
    dt = cfg["trajectories.dt"]
    steps = int(round(cfg["trajectories.t_end"] / dt))
    # fields every dt/2 so each Runge-Kutta stage falls on a snapshot
    series = split_step_evolve(psi0, V, dt / 2, 2 * steps)
    fields = [polar_decompose(psi) for psi in series.states]
    ens = bohmian_trajectories(series.times, fields, cfg["trajectories.x0"], dt)
    atomic_write(_out(cfg, "trajectories.csv"), ens.to_csv())
    print(f"trajectories: {ens.initial.size} paths, {ens.times.size} samples")
    return 0


def cmd_expansion(cfg, args):
    grid, constants, _ = _setup(cfg)
    psi = _state(cfg, grid, constants)
    rep = hbar_expansion_check(polar_decompose(psi), cfg["expansion.hbars"], cfg["expansion.y_window"])
    write_json(_out(cfg, "expansion.json"), rep.as_dict())
    print(f"expansion: slope {rep.slope:.4f}")
    return 0


def cmd_star(cfg, args):
    try:
        a = parse_symbol(args.a)
        b = parse_symbol(args.b) if args.b else None
        hbar = parse_symbol(args.hbar).coefficient(0, 0)
    except SymbolParseError as exc:
        raise ConfigError(str(exc)) from exc
    hbar = hbar.re if isinstance(hbar, QQi) and hbar.im == 0 else complex(hbar).real
    if args.op == "transform":
        try:
            src, dst = kernel_by_name(args.source), kernel_by_name(args.target)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        result = symbol_transform(a, src, dst, hbar)
    elif b is None:
        raise ConfigError(f"operation {args.op!r} needs two symbols")
    elif args.op == "star":
        result = poly_star(a, b, args.kind, hbar)
    elif args.op == "bracket":
        result = moyal_bracket(a, b, hbar)
    else:
        result = a * b
    print(format_symbol(result))
    return 0


COMMANDS = {
    "wigner": cmd_wigner,
    "cohen": cmd_cohen,
    "mehta": cmd_mehta,
    "verify-theorem": cmd_verify_theorem,
    "evolve": cmd_evolve,
    "trajectories": cmd_trajectories,
    "expansion": cmd_expansion,
    "star": cmd_star,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="bohmstar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=GENERATED_BY)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="flat key = value configuration file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a configuration key (repeatable)")
    common.add_argument("-o", "--output-dir", help="output directory (overrides config and env)")
    common.add_argument("-j", "--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker threads for independent sub-tasks")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "cohen":
            p.add_argument("--kernel", help="kernel name (overrides the config key)")
        if name == "star":
            p.add_argument("a", help="first symbol, e.g. '1*x^1*p^1'")
            p.add_argument("b", nargs="?", help="second symbol")
            p.add_argument("--op", choices=("star", "bracket", "product", "transform"), default="star")
            p.add_argument("--kind", choices=STAR_KINDS, default="weyl")
            p.add_argument("--hbar", default="1", help="hbar (integers and fractions stay exact)")
            p.add_argument("--from", dest="source", default="standard")
            p.add_argument("--to", dest="target", default="wigner")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        overrides = list(args.set)
        if args.output_dir:
            overrides.append(f"output.dir={args.output_dir}")
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition failed ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
