"""Phase-space containers and the transforms between their representations.

Three equivalent pictures of a quasi-distribution are used:

* ``F(x, p)``      the phase-space field,
* ``K(x, y)``      the mixed field, ``F = (1/2pi) int dy exp(-i y p) K``,
* ``A(xi, eta)``   the ambiguity plane, ``K(x, eta) = (1/2pi) int dxi exp(-i xi x) A``.

On a :class:`~bohmstar.grids.PhaseSpaceGrid` every step is a centred DFT,
so the round trips are exact up to rounding.
"""

from dataclasses import dataclass, field

import numpy as np

from .grids import PhaseSpaceGrid, _frozen
from .spectral import centered_fft, centered_ifft


def mixed_to_phase_space(K, psgrid):
    return psgrid.dy / (2 * np.pi) * centered_fft(K, axis=1)


def phase_space_to_mixed(F, psgrid):
    return 2 * np.pi / psgrid.dy * centered_ifft(F, axis=1)


def _xi_phase(psgrid):
    return np.exp(1j * psgrid.xi * psgrid.spatial.x_min)[:, None]


def mixed_to_ambiguity(K, psgrid):
    """``A(xi, eta) = sum_x dx K(x, eta) exp(i xi x)``."""
    n = psgrid.spatial.n
    return psgrid.dx * n * _xi_phase(psgrid) * np.fft.fftshift(np.fft.ifft(K, axis=0), axes=0)


def ambiguity_to_mixed(A, psgrid):
    """Inverse of :func:`mixed_to_ambiguity`."""
    spec = np.fft.ifftshift(A / _xi_phase(psgrid), axes=0)
    return psgrid.dxi / (2 * np.pi) * np.fft.fft(spec, axis=0)


@dataclass(frozen=True, eq=False)
class AmbiguityFunction:
    grid: PhaseSpaceGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, complex))

    @property
    def xi(self):
        return self.grid.xi

    @property
    def eta(self):
        return self.grid.y

    def at_origin(self):
        return complex(self.values[self.grid.spatial.n // 2, self.grid.n_p // 2])

    def hermitian_defect(self):
        """max |A(-xi,-eta) - A(xi,eta)^*| over the symmetric part of the grid."""
        a = self.values[1:, 1:]
        return float(np.max(np.abs(a[::-1, ::-1] - np.conj(a))))


@dataclass(frozen=True, eq=False)
class QuasiDistribution:
    """Field ``F^f(x, p)`` tagged with the kernel that produced it."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    kernel: object
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        values = _frozen(self.values, complex)
        if values.shape != self.grid.shape:
            raise ValueError(f"values have shape {values.shape}, grid needs {self.grid.shape}")
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.x

    @property
    def p(self):
        return self.grid.p

    @property
    def hbar(self):
        return self.grid.hbar

    @property
    def real(self):
        return self.values.real

    def integral(self):
        return complex(np.sum(self.values) * self.grid.dx * self.grid.dp)

    def mixed(self):
        return phase_space_to_mixed(self.values, self.grid)

    def ambiguity(self):
        return mixed_to_ambiguity(self.mixed(), self.grid)

    def with_values(self, values, kernel=None, **meta):
        md = dict(self.metadata)
        md.update(meta)
        return QuasiDistribution(self.grid, values, kernel or self.kernel, md)

    def describe(self):
        return {
            "grid": self.grid.as_dict(),
            "hbar": self.grid.hbar,
            "mass": self.metadata.get("mass"),
            "kernel_tag": self.kernel.tag,
            "norm": [self.integral().real, self.integral().imag],
        }


@dataclass(frozen=True, eq=False)
class MixedField:
    """Field ``B(x, y)`` in the mixed representation.

    ``defined`` marks samples whose shifted arguments stay inside the grid;
    elsewhere the stored value is zero.
    """

    grid: PhaseSpaceGrid
    values: np.ndarray
    defined: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, complex))
        if self.defined is None:
            object.__setattr__(self, "defined", _frozen(np.ones(self.grid.shape, bool)))
        else:
            object.__setattr__(self, "defined", _frozen(self.defined, bool))

    @property
    def x(self):
        return self.grid.x

    @property
    def y(self):
        return self.grid.y

    def to_phase_space(self):
        """``(1/2pi) int dy exp(-i y p) B(x, y)`` on the grid momenta."""
        return mixed_to_phase_space(self.values, self.grid)
