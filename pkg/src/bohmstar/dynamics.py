"""Time evolution: split-step Schrodinger propagation and exact phase-space
transport of Wigner functions under quadratic Hamiltonians."""

from dataclasses import dataclass
import logging

import numpy as np
from scipy.linalg import expm

from .errors import NotQuadratic
from .grids import _frozen
from .spectral import spectral_shift, wavenumbers

log = logging.getLogger(__name__)

QUADRATIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Potential:
    """Potential sampled on a grid, optionally flagged as ``a + b x + c x^2``."""

    grid: object
    V: np.ndarray
    quadratic: tuple = None

    def __post_init__(self):
        V = _frozen(self.V, float)
        if V.shape != (self.grid.n,):
            raise ValueError("potential must be sampled on the grid")
        object.__setattr__(self, "V", V)
        if self.quadratic is not None:
            a, b, c = self.quadratic
            x = self.grid.x
            ref = a + b * x + c * x**2
            scale = max(1.0, float(np.max(np.abs(ref))))
            if np.max(np.abs(ref - V)) > QUADRATIC_TOL * scale:
                raise ValueError("quadratic coefficients do not match the sampled values")
            object.__setattr__(self, "quadratic", (float(a), float(b), float(c)))

    @classmethod
    def polynomial(cls, grid, a=0.0, b=0.0, c=0.0):
        x = grid.x
        return cls(grid, a + b * x + c * x**2, (a, b, c))

    @classmethod
    def free(cls, grid):
        return cls.polynomial(grid)

    @classmethod
    def harmonic(cls, grid, omega=1.0, mass=1.0, center=0.0):
        k = 0.5 * mass * omega**2
        return cls.polynomial(grid, k * center**2, -2 * k * center, k)

    @property
    def is_quadratic(self):
        return self.quadratic is not None


@dataclass(frozen=True)
class EvolutionSeries:
    times: np.ndarray
    states: tuple
    steps: np.ndarray
    stability: float

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k):
        return self.states[k]


def split_step_evolve(psi0, V, dt, steps, every=1, check_every=1):
    """Strang splitting ``exp(-iV dt/2h) exp(-iT dt/h) exp(-iV dt/2h)``.

    Returns the states at step 0 and every ``every`` steps (plus the last
    step).  The boundary-decay condition is checked every ``check_every``
    steps and at each snapshot.
    """
    if steps < 0 or every < 1:
        raise ValueError("steps must be >= 0 and every >= 1")
    grid, hbar, m = psi0.grid, psi0.hbar, psi0.mass
    Vv = np.zeros(grid.n) if V is None else V.V
    stability = float(dt * np.max(np.abs(Vv)) / hbar)
    log.info("split-step: dt*max|V|/hbar = %.3g", stability)
    if stability > 1.0:
        log.warning("dt*max|V|/hbar = %.3g exceeds 1; potential phase under-resolved", stability)
    k = wavenumbers(grid.n, grid.dx)
    kin = np.exp(-1j * hbar * k**2 * dt / (2 * m))
    half = np.exp(-0.5j * Vv * dt / hbar)
    psi = psi0.values.copy()
    states, times, idx = [psi0], [0.0], [0]
    for step in range(1, steps + 1):
        psi = half * np.fft.ifft(kin * np.fft.fft(half * psi))
        snap = step % every == 0 or step == steps
        if snap or step % check_every == 0:
            cur = psi0.replace(psi)
            cur.check_boundary_decay(step=step)
            if snap:
                states.append(cur)
                times.append(step * dt)
                idx.append(step)
    return EvolutionSeries(np.array(times), tuple(states), np.array(idx), stability)


def backward_flow(V, t, mass=1.0):
    """Affine map ``z -> M z + c`` sending ``(x, p)`` at time t to its
    classical preimage at time 0 under ``H = p^2/2m + V``."""
    if not V.is_quadratic:
        raise NotQuadratic("phase-space transport needs a quadratic potential")
    _, b, c = V.quadratic
    gen = np.array([[0.0, 1.0 / mass, 0.0],
                    [-2.0 * c, 0.0, -b],
                    [0.0, 0.0, 0.0]])
    flow = expm(-t * gen)
    return flow[:2, :2], flow[:2, 2]


def _shear_x(F, dx, p, alpha):
    """``F(x + alpha p, p)``: per-column spectral shift along x."""
    if alpha == 0:
        return F
    return spectral_shift(F.T, dx, alpha * p, axis=-1).T


def _shear_p(F, dp, x, beta):
    """``F(x, p + beta x)``: per-row spectral shift along p."""
    if beta == 0:
        return F
    return spectral_shift(F, dp, beta * x, axis=-1)


def _apply_linear(F, M, x, p, dx, dp, depth=0):
    (a, b), (c, d) = M
    if abs(c) < 1e-12:
        if abs(a - 1) < 1e-12 and abs(d - 1) < 1e-12:
            return _shear_x(F, dx, p, b)
        if depth > 8:
            raise NotQuadratic("flow matrix could not be factored into shears")
        # split into two steps whose lower-left entries do not vanish
        R = np.array([[1.0, 0.0], [1.0, 1.0]])
        F = _apply_linear(F, M @ np.linalg.inv(R), x, p, dx, dp, depth + 1)
        return _apply_linear(F, R, x, p, dx, dp, depth + 1)
    alpha, beta, gamma = (a - 1) / c, c, (d - 1) / c
    F = _shear_x(F, dx, p, alpha)
    F = _shear_p(F, dp, x, beta)
    return _shear_x(F, dx, p, gamma)


def moyal_evolve_quadratic(F0, V, t):
    """Transport ``F0`` along the classical flow: ``F(z, t) = F0(M z + c)``.

    For quadratic Hamiltonians the Moyal bracket equals the Poisson bracket,
    so this is exact.  The linear part of the backward flow is factored into
    three shears, each applied as a spectral shift along one axis; the
    translation is a shift along both.
    """
    if not V.is_quadratic:
        raise NotQuadratic("phase-space transport needs a quadratic potential")
    g = F0.grid
    mass = F0.metadata.get("mass") or 1.0
    if t == 0:
        return F0.with_values(F0.values, generated_by="moyal_evolve_quadratic", t=0.0)
    M, c = backward_flow(V, t, mass)
    F = F0.values
    # F0(Mz + c) = G(Mz) with G(z) = F0(z + c)
    F = spectral_shift(F, g.dx, c[0], axis=0)
    F = spectral_shift(F, g.dp, c[1], axis=1)
    F = _apply_linear(F, M, g.x, g.p, g.dx, g.dp)
    return F0.with_values(F, generated_by="moyal_evolve_quadratic", t=float(t))
