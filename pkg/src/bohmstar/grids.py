"""Uniform periodic grids, wavefunctions and the free Gaussian packet.

Conventions
-----------
Position samples are ``x_k = x_min + k dx`` with ``dx = (x_max - x_min)/n``;
``x_max`` itself is the periodic image of ``x_min`` and is not sampled.
Momentum samples are centred, ``p_j = (j - n/2) dp`` with
``dp = 2 pi hbar / (x_max - x_min)``, and the momentum wavefunction is

    phi(p) = (2 pi hbar)^(-1/2) sum_k dx psi(x_k) exp(-i x_k p / hbar),

the rectangle rule for the continuum transform (exact for periodic,
band-limited data).
"""

from dataclasses import dataclass, field
import hashlib

import numpy as np

from .errors import BoundaryDecayViolated, ZeroField
from .spectral import is_power_of_two

#: |psi| must not exceed this at either end of the grid.
BOUNDARY_DECAY = 1e-10


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be strictly positive")


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if not is_power_of_two(int(self.n)) or int(self.n) != self.n:
            raise ValueError(f"n must be a power of two, got {self.n}")
        if self.n < 8:
            raise ValueError("n must be at least 8")

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def dx(self):
        return self.length / self.n

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n)

    def dp(self, hbar):
        return 2.0 * np.pi * hbar / self.length

    def momenta(self, hbar):
        return (np.arange(self.n) - self.n // 2) * self.dp(hbar)

    def as_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max, "n": self.n}


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Position grid times the momentum grid, plus the two dual grids.

    ``y`` is the Fourier partner of ``p`` (the variable of the mixed
    representation, and the ``eta`` of the ambiguity plane) and ``xi`` the
    partner of ``x``.  The ``y`` spacing is ``dx / hbar`` so that the
    shifts ``hbar y`` land on grid points.  ``n_p`` defaults to ``n``, in
    which case the momentum axis coincides with :meth:`SpatialGrid.momenta`.
    """

    spatial: SpatialGrid
    hbar: float = 1.0
    n_p: int = None

    def __post_init__(self):
        if self.n_p is None:
            object.__setattr__(self, "n_p", self.spatial.n)
        if not is_power_of_two(int(self.n_p)):
            raise ValueError("n_p must be a power of two")

    @property
    def x(self):
        return self.spatial.x

    @property
    def dx(self):
        return self.spatial.dx

    @property
    def dy(self):
        return self.spatial.dx / self.hbar

    @property
    def y(self):
        return (np.arange(self.n_p) - self.n_p // 2) * self.dy

    @property
    def y_steps(self):
        """Integer grid offsets ``hbar y / dx`` for every ``y`` sample."""
        return np.arange(self.n_p) - self.n_p // 2

    @property
    def dp(self):
        return 2.0 * np.pi / (self.n_p * self.dy)

    @property
    def p(self):
        return (np.arange(self.n_p) - self.n_p // 2) * self.dp

    @property
    def dxi(self):
        return 2.0 * np.pi / self.spatial.length

    @property
    def xi(self):
        return (np.arange(self.spatial.n) - self.spatial.n // 2) * self.dxi

    @property
    def shape(self):
        return (self.spatial.n, self.n_p)

    def as_dict(self):
        d = self.spatial.as_dict()
        d.update(n_p=self.n_p, p_min=float(self.p[0]), dp=float(self.dp))
        return d


@dataclass(frozen=True)
class GaussianPacketParams:
    sigma0: float = 1.0
    p0: float = 0.0
    t: float = 0.0
    x0: float = 0.0

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise ValueError("sigma0 must be positive")


@dataclass(frozen=True)
class WaveFunction:
    grid: SpatialGrid
    values: np.ndarray
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        values = _frozen(self.values, complex)
        if values.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got {values.shape}")
        object.__setattr__(self, "values", values)

    @property
    def hbar(self):
        return self.constants.hbar

    @property
    def mass(self):
        return self.constants.mass

    @property
    def density(self):
        return np.abs(self.values) ** 2

    def norm(self):
        return l2_norm(self)

    def digest(self):
        h = hashlib.sha256()
        h.update(repr((self.grid.as_dict(), self.hbar, self.mass)).encode())
        h.update(np.ascontiguousarray(self.values).tobytes())
        return h.hexdigest()[:16]

    def replace(self, values):
        return WaveFunction(self.grid, values, self.constants)

    def check_boundary_decay(self, threshold=BOUNDARY_DECAY, step=None):
        edge = max(abs(self.values[0]), abs(self.values[-1]))
        if edge > threshold:
            where = "" if step is None else f" at step {step}"
            raise BoundaryDecayViolated(
                f"|psi| = {edge:.3e} at the grid edge exceeds {threshold:.1e}{where}; "
                "widen the grid", step=step)
        return self


@dataclass(frozen=True)
class MomentumWaveFunction:
    p: np.ndarray
    values: np.ndarray
    hbar: float
    x_min: float

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen(self.p, float))
        object.__setattr__(self, "values", _frozen(self.values, complex))

    @property
    def dp(self):
        return float(self.p[1] - self.p[0])

    @property
    def density(self):
        return np.abs(self.values) ** 2

    def norm(self):
        return float(np.sqrt(np.sum(self.density) * self.dp))


def l2_norm(psi):
    return float(np.sqrt(np.sum(np.abs(psi.values) ** 2) * psi.grid.dx))


def normalize(psi):
    """Return ``psi`` rescaled to unit L2 norm."""
    norm = l2_norm(psi)
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroField("cannot normalise a vanishing field")
    return psi.replace(psi.values / norm)


def wavefunction(grid, values, constants=None, check=True):
    """Build a normalised :class:`WaveFunction` from samples."""
    psi = normalize(WaveFunction(grid, values, constants or PhysicalConstants()))
    if check:
        psi.check_boundary_decay()
    return psi


def to_momentum(psi):
    grid, hbar = psi.grid, psi.hbar
    p = grid.momenta(hbar)
    phase = np.exp(-1j * grid.x_min * p / hbar)
    values = grid.dx / np.sqrt(2 * np.pi * hbar) * phase * np.fft.fftshift(np.fft.fft(psi.values))
    return MomentumWaveFunction(p, values, hbar, grid.x_min)


def from_momentum(phi, grid, constants=None):
    """Inverse of :func:`to_momentum` on the given spatial grid."""
    constants = constants or PhysicalConstants(hbar=phi.hbar)
    phase = np.exp(1j * grid.x_min * phi.p / phi.hbar)
    raw = np.fft.ifft(np.fft.ifftshift(phi.values * phase))
    return WaveFunction(grid, raw * np.sqrt(2 * np.pi * phi.hbar) / grid.dx, constants)


def gaussian_values(x, params, constants):
    """Closed-form free Gaussian packet at time ``params.t``."""
    hbar, m = constants.hbar, constants.mass
    s0, p0, t = params.sigma0, params.p0, params.t
    u = p0 / m
    st = s0 * (1 + 1j * hbar * t / (2 * m * s0**2))
    xc = np.asarray(x) - params.x0
    return (2 * np.pi * st**2) ** -0.25 * np.exp(
        -(xc - u * t) ** 2 / (4 * s0 * st) + 1j / hbar * p0 * (xc - 0.5 * u * t))


def make_gaussian(params, grid, constants=None):
    """Sample the free Gaussian packet on ``grid``.

    The samples are not renormalised, so the discrete norm reports the
    truncation of the tails.  Raises :class:`BoundaryDecayViolated` when the
    packet does not fit inside the grid.
    """
    constants = constants or PhysicalConstants()
    psi = WaveFunction(grid, gaussian_values(grid.x, params, constants), constants)
    return psi.check_boundary_decay()
