"""Polar decomposition, quantum potential and Bohmian dynamics.

A state ``psi = R exp(iS/hbar)`` is split into amplitude and action.
Derivatives of ``S`` are never taken from the unwrapped ``S`` array
(which is not periodic); they come from the logarithmic derivative of the
periodic field ``R exp(iS/hbar)`` instead.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (InsufficientSamples, LeftDomain, MaskedRegion,
                     NodeSplitsDomain, TrajectoriesCrossed)
from .grids import PhysicalConstants, SpatialGrid, WaveFunction, _frozen
from .spectral import spectral_derivative

#: default node threshold, relative to max R
NODE_THRESHOLD = 1e-8


@dataclass(frozen=True)
class PolarFields:
    grid: SpatialGrid
    R: np.ndarray
    S: np.ndarray
    node_mask: np.ndarray
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        object.__setattr__(self, "R", _frozen(self.R, float))
        object.__setattr__(self, "S", _frozen(self.S, float))
        object.__setattr__(self, "node_mask", _frozen(self.node_mask, bool))
        if np.any(self.R < 0):
            raise ValueError("amplitude must be non-negative")

    @property
    def hbar(self):
        return self.constants.hbar

    @property
    def density(self):
        return self.R**2

    @property
    def support(self):
        """Index slice of the single unmasked region."""
        idx = np.flatnonzero(~self.node_mask)
        return slice(idx[0], idx[-1] + 1)

    def recombine(self):
        return self.R * np.exp(1j * self.S / self.hbar)

    def wavefunction(self):
        return WaveFunction(self.grid, self.recombine(), self.constants)

    def phase_derivative(self, order=1):
        """``d^order S / dx^order`` (orders 1 to 3), NaN on masked points."""
        if order not in (1, 2, 3):
            raise ValueError("only orders 1, 2 and 3 are available")
        psi = self.recombine()
        dx = self.grid.dx
        mask = self.node_mask
        safe = np.where(mask, 1.0, psi)
        w = spectral_derivative(psi, dx, 1) / safe
        if order == 1:
            out = w
        else:
            q2 = spectral_derivative(psi, dx, 2) / safe
            if order == 2:
                out = q2 - w**2
            else:
                q3 = spectral_derivative(psi, dx, 3) / safe
                out = q3 - 3 * q2 * w + 2 * w**3
        return np.where(mask, np.nan, self.hbar * out.imag)

    def with_phase(self, S):
        return PolarFields(self.grid, self.R, S, self.node_mask, self.constants)


def _check_single_region(mask):
    unmasked = np.flatnonzero(~mask)
    if unmasked.size == 0:
        raise NodeSplitsDomain("every grid point is below the node threshold")
    if unmasked[-1] - unmasked[0] + 1 != unmasked.size:
        raise NodeSplitsDomain(
            "nodes split the domain into several regions; the phase unwrap is ambiguous")


def polar_decompose(psi, node_threshold=None):
    """Split ``psi`` into amplitude ``R`` and unwrapped action ``S``.

    ``S`` is anchored so that at the maximum of ``R`` it equals ``hbar``
    times the principal argument of ``psi`` there; ``R exp(iS/hbar)``
    reproduces ``psi`` exactly.  ``node_threshold`` is absolute and
    defaults to ``1e-8 * max R``.
    """
    R = np.abs(psi.values)
    if node_threshold is None:
        node_threshold = NODE_THRESHOLD * R.max()
    mask = R < node_threshold
    _check_single_region(mask)
    angle = np.angle(psi.values)
    unwrapped = np.unwrap(angle)
    anchor = int(np.argmax(R))
    unwrapped += angle[anchor] - unwrapped[anchor]
    return PolarFields(psi.grid, R, psi.hbar * unwrapped, mask, psi.constants)


@dataclass(frozen=True)
class QuantumPotentialField:
    grid: SpatialGrid
    Q: np.ndarray
    node_mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Q", _frozen(self.Q, float))
        object.__setattr__(self, "node_mask", _frozen(self.node_mask, bool))

    def at(self, index):
        index = np.asarray(index)
        if np.any(self.node_mask[index]):
            raise MaskedRegion("quantum potential requested at a node")
        return self.Q[index]


def quantum_potential(pf, constants=None):
    """``Q = -(hbar^2 / 2m) R'' / R`` with a spectral second derivative."""
    constants = constants or pf.constants
    hbar, m = constants.hbar, constants.mass
    R = pf.R
    d2 = spectral_derivative(R, pf.grid.dx, 2)
    safe = np.where(pf.node_mask, 1.0, R)
    Q = np.where(pf.node_mask, np.nan, -hbar**2 / (2 * m) * d2 / safe)
    return QuantumPotentialField(pf.grid, Q, pf.node_mask)


def quantum_potential_from_density(pf, constants=None):
    """The density form ``-(hbar^2/4m) [P''/P - (P')^2 / (2 P^2)]``."""
    constants = constants or pf.constants
    hbar, m = constants.hbar, constants.mass
    P = pf.density
    dx = pf.grid.dx
    d1 = spectral_derivative(P, dx, 1)
    d2 = spectral_derivative(P, dx, 2)
    safe = np.where(pf.node_mask, 1.0, P)
    Q = -hbar**2 / (4 * m) * (d2 / safe - 0.5 * d1**2 / safe**2)
    return QuantumPotentialField(pf.grid, np.where(pf.node_mask, np.nan, Q), pf.node_mask)


def _uniform_step(times, minimum):
    times = np.asarray(times, dtype=float)
    if times.size < minimum:
        raise InsufficientSamples(f"need at least {minimum} time samples, got {times.size}")
    steps = np.diff(times)
    dt = steps.mean()
    if not np.allclose(steps, dt, rtol=1e-9, atol=0):
        raise InsufficientSamples("time samples must be uniformly spaced")
    return times, dt


def bohm_residuals(times, fields, V=None, constants=None, support=1e-4):
    """L-infinity residuals of the continuity and Hamilton-Jacobi equations.

    Time derivatives are central differences over neighbouring samples,
    space derivatives are spectral.  The Hamilton-Jacobi residual is taken
    where ``R >= support * max R`` because the quantum potential is
    meaningless in the far tails.  Returns ``(continuity, hamilton_jacobi)``.
    """
    times, dt = _uniform_step(times, 3)
    if len(fields) != times.size:
        raise InsufficientSamples("one PolarFields per time sample is required")
    constants = constants or fields[0].constants
    hbar, m = constants.hbar, constants.mass
    grid = fields[0].grid
    dx = grid.dx
    V = np.zeros(grid.n) if V is None else np.broadcast_to(np.asarray(V, dtype=float), (grid.n,))
    psis = [pf.recombine() for pf in fields]
    cont = 0.0
    hj = 0.0
    for k in range(1, len(fields) - 1):
        pf = fields[k]
        psi = psis[k]
        dP_dt = (fields[k + 1].density - fields[k - 1].density) / (2 * dt)
        flux = hbar / m * np.imag(np.conj(psi) * spectral_derivative(psi, dx, 1))
        cont = max(cont, float(np.max(np.abs(dP_dt + spectral_derivative(flux, dx, 1)))))

        dS_dt = hbar * np.angle(psis[k + 1] * np.conj(psis[k - 1])) / (2 * dt)
        bulk = pf.R >= support * pf.R.max()
        dS = pf.phase_derivative(1)
        Q = quantum_potential(pf, constants).Q
        res = dS_dt + dS**2 / (2 * m) + V + Q
        hj = max(hj, float(np.max(np.abs(res[bulk]))))
    return cont, hj


@dataclass(frozen=True)
class BohmDistribution:
    """Section form of ``R^2(x) delta(p - S'(x))``.

    ``momentum_section`` is NaN where the section is undefined (nodes,
    or outside the region reached by transported characteristics).
    """

    grid: SpatialGrid
    density: np.ndarray
    momentum_section: np.ndarray
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        object.__setattr__(self, "density", _frozen(self.density, float))
        object.__setattr__(self, "momentum_section", _frozen(self.momentum_section, float))
        if np.any(self.density < 0):
            raise ValueError("density must be non-negative")

    @property
    def defined(self):
        return np.isfinite(self.momentum_section)

    def mass(self):
        return float(np.sum(self.density) * self.grid.dx)

    def section_at(self, index):
        index = np.asarray(index)
        if not np.all(self.defined[index]):
            raise MaskedRegion("momentum section undefined at a requested point")
        return self.momentum_section[index]

    def rasterize(self, psgrid):
        """Nearest-bin rasterisation onto ``psgrid`` (a PhaseSpaceGrid).

        Each column carries ``density / dp`` in the bin nearest to the
        section; columns without a section are dropped.
        """
        out = np.zeros(psgrid.shape)
        cols = np.flatnonzero(self.defined)
        p = psgrid.p
        bins = np.rint((self.momentum_section[cols] - p[0]) / psgrid.dp).astype(int)
        inside = (bins >= 0) & (bins < p.size)
        out[cols[inside], bins[inside]] = self.density[cols[inside]] / psgrid.dp
        return out


def bohm_distribution(pf):
    return BohmDistribution(pf.grid, pf.density, pf.phase_derivative(1), pf.constants)


class _FieldInterpolator:
    """Cubic in space (per snapshot), linear in time."""

    def __init__(self, times, grid, arrays, derivative=0):
        self.times = np.asarray(times, dtype=float)
        self.grid = grid
        self.splines = []
        self.bounds = []
        x = grid.x
        for a in arrays:
            ok = np.isfinite(a)
            idx = np.flatnonzero(ok)
            sl = slice(idx[0], idx[-1] + 1)
            spline = CubicSpline(x[sl], a[sl])
            if derivative:
                spline = spline.derivative(derivative)
            self.splines.append(spline)
            self.bounds.append((x[idx[0]], x[idx[-1]]))

    def __call__(self, xs, t):
        times = self.times
        if times.size == 1:
            k, w = 0, 0.0
        else:
            k = int(np.clip(np.searchsorted(times, t, side="right") - 1, 0, times.size - 2))
            w = (t - times[k]) / (times[k + 1] - times[k])
            if abs(w - 1.0) < 1e-9:
                k, w = k + 1, 0.0
            elif abs(w) < 1e-9:
                w = 0.0
        lo, hi = self.bounds[k]
        if w:
            lo = max(lo, self.bounds[k + 1][0])
            hi = min(hi, self.bounds[k + 1][1])
        if np.any(xs < lo) or np.any(xs > hi):
            raise LeftDomain(f"trajectory left the unmasked domain [{lo:.3g}, {hi:.3g}] at t={t:.6g}")
        out = self.splines[k](xs)
        if w:
            out = (1 - w) * out + w * self.splines[k + 1](xs)
        return out


def _rk4(rhs, y0, t0, h, steps):
    ys = [np.array(y0, dtype=float)]
    y = ys[0]
    t = t0
    for _ in range(steps):
        k1 = rhs(y, t)
        k2 = rhs(y + 0.5 * h * k1, t + 0.5 * h)
        k3 = rhs(y + 0.5 * h * k2, t + 0.5 * h)
        k4 = rhs(y + h * k3, t + h)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        ys.append(y)
    return np.array(ys)


@dataclass(frozen=True)
class TrajectoryEnsemble:
    initial: np.ndarray
    times: np.ndarray
    positions: np.ndarray  # shape (len(times), len(initial))

    def to_csv(self):
        header = "t," + ",".join(f"x_{i}" for i in range(self.initial.size))
        rows = [header]
        for t, xs in zip(self.times, self.positions):
            rows.append(",".join(repr(float(v)) for v in (t, *xs)))
        return "\n".join(rows) + "\n"


def _check_order(order, positions, times):
    for t, xs in zip(times, positions):
        if np.any(np.diff(xs[order]) <= 0):
            raise TrajectoriesCrossed(f"trajectories crossed by t={t:.6g}")


def bohmian_trajectories(times, fields, initial_xs, dt):
    """Integrate ``m dx/dt = dS/dx`` with classical fourth-order Runge-Kutta.

    ``fields`` are PolarFields sampled at ``times``.  The velocity field
    is a cubic spline in space and linear in time between snapshots, so
    sampling the fields every ``dt / 2`` makes every Runge-Kutta stage hit a
    stored snapshot.
    """
    times = np.asarray(times, dtype=float)
    mass = fields[0].constants.mass
    velocity = _FieldInterpolator(times, fields[0].grid,
                                  [pf.phase_derivative(1) / mass for pf in fields])
    x0 = np.atleast_1d(np.asarray(initial_xs, dtype=float))
    steps = int(round((times[-1] - times[0]) / dt))
    positions = _rk4(lambda x, t: velocity(x, t), x0, times[0], dt, steps)
    out_times = times[0] + dt * np.arange(steps + 1)
    order = np.argsort(x0)
    _check_order(order, positions, out_times)
    return TrajectoryEnsemble(_frozen(x0), _frozen(out_times), _frozen(positions))


def evolve_bohm_distribution(bd, t, quantum=None, potential=None, dt=None, support=1e-12):
    """Transport the section along the characteristics of ``H + Q``.

    ``quantum`` is ``(times, [QuantumPotentialField, ...])`` covering the
    interval from ``times[0]`` to ``times[0] + t``, or ``None`` for
    ``Q = 0``.  ``potential`` is ``V`` sampled on the grid, or ``None``.
    The points ``(x, S'(x))`` of every column carrying more than
    ``support * max density`` are moved with fourth-order Runge-Kutta; the
    new section is read off by spline interpolation and the density through
    the Jacobian ``dX/dx0``.
    """
    if t == 0:
        return bd
    grid = bd.grid
    m = bd.constants.mass
    x = grid.x
    V = np.zeros(grid.n) if potential is None else np.asarray(potential, dtype=float)

    if quantum is None:
        t0 = 0.0
        force = _FieldInterpolator([t0], grid, [V], derivative=1)
        if dt is None:
            dt = t / 1000
    else:
        q_times, q_fields = quantum
        q_times = np.asarray(q_times, dtype=float)
        t0 = q_times[0]
        force = _FieldInterpolator(q_times, grid, [V + qf.Q for qf in q_fields], derivative=1)
        if dt is None:
            dt = 2 * (q_times[1] - q_times[0]) if q_times.size > 1 else t / 1000
    static = quantum is None and potential is None
    steps = max(1, int(round(t / dt)))

    cols = np.flatnonzero(bd.defined & (bd.density > support * bd.density.max()))
    x0 = x[cols]
    n = x0.size

    def rhs(z, time):
        xs, ps = z[:n], z[n:]
        dp = np.zeros(n) if static else -force(xs, time)
        return np.concatenate([ps / m, dp])

    z = _rk4(rhs, np.concatenate([x0, bd.momentum_section[cols]]), t0, t / steps, steps)[-1]
    X, P = z[:n], z[n:]
    if np.any(np.diff(X) <= 0):
        raise TrajectoriesCrossed("characteristics crossed: the section became multivalued")
    jac = CubicSpline(x0, X).derivative()(x0)
    inside = (x >= X[0]) & (x <= X[-1])
    section = np.full(grid.n, np.nan)
    density = np.zeros(grid.n)
    section[inside] = CubicSpline(X, P)(x[inside])
    density[inside] = CubicSpline(X, bd.density[cols] / jac)(x[inside])
    return BohmDistribution(grid, np.clip(density, 0, None), section, bd.constants)
