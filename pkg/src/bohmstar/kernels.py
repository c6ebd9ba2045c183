"""Cohen kernels ``f(xi, eta)`` and their admissibility checks.

Built-in kernels are callables ``f(xi, eta, hbar)`` with a known power
series in ``u = xi * eta``.  Custom kernels are either callables of
``(xi, eta)`` or arrays sampled on the dual grid of a
:class:`~bohmstar.grids.PhaseSpaceGrid` (``xi`` rows, ``eta = y`` columns).
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .errors import KernelNotFinite, UnsupportedKernel
from .symbols import QQi

#: Tolerance for the two admissibility constraints.
CONSTRAINT_TOL = 1e-10

TAGS = ("wigner", "standard", "antistandard", "bornjordan", "custom")


def _exact(v):
    if isinstance(v, (int, Fraction)):
        return QQi(v)
    return complex(v)


def _series_exp(coef, order):
    """Coefficients of ``exp(coef * u)`` up to ``u^order``."""
    out, term = [], QQi(1) if isinstance(coef, QQi) else 1.0 + 0j
    for k in range(order + 1):
        out.append(term)
        term = term * coef / (k + 1)
    return out


def _series_sinc(half_hbar, order):
    """Coefficients of ``sin(z)/z`` with ``z = half_hbar * u``."""
    out = []
    for k in range(order + 1):
        if k % 2:
            out.append(0 * half_hbar)
        else:
            j = k // 2
            out.append(half_hbar ** k * ((-1) ** j) / math.factorial(k + 1))
    return out


def series_reciprocal(c, order):
    """Power-series reciprocal ``1/sum c_k u^k`` up to ``u^order``."""
    if not c[0]:
        raise ZeroDivisionError("series has no constant term")
    out = [1 / c[0]]
    for k in range(1, order + 1):
        acc = 0 * c[0]
        for j in range(1, k + 1):
            if j < len(c):
                acc = acc + c[j] * out[k - j]
        out.append(-acc / c[0])
    return out


def series_product(a, b, order):
    out = []
    for k in range(order + 1):
        acc = 0 * a[0]
        for j in range(k + 1):
            if j < len(a) and k - j < len(b):
                acc = acc + a[j] * b[k - j]
        out.append(acc)
    return out


@dataclass(frozen=True, eq=False)
class CohenKernel:
    tag: str
    func: object = None
    samples: np.ndarray = None
    grid: object = None
    description: str = ""
    constraints: tuple = field(default=None, compare=False)

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown kernel tag {self.tag!r}")
        if (self.func is None) == (self.samples is None):
            raise ValueError("give exactly one of func or samples")
        if self.samples is not None:
            if self.grid is None:
                raise ValueError("sampled kernels need the phase-space grid they live on")
            s = np.array(self.samples, dtype=complex)
            if s.shape != self.grid.shape:
                raise ValueError(f"samples have shape {s.shape}, grid needs {self.grid.shape}")
            s.flags.writeable = False
            object.__setattr__(self, "samples", s)
        if self.constraints is None:
            object.__setattr__(self, "constraints", _constraint_flags(self))

    @property
    def is_builtin(self):
        return self.tag != "custom"

    @property
    def admissible(self):
        return all(self.constraints)

    def __call__(self, xi, eta, hbar=1.0):
        if self.func is None:
            raise UnsupportedKernel("sampled kernels can only be evaluated on their grid")
        if self.is_builtin:
            return self.func(xi, eta, hbar)
        return self.func(xi, eta)

    def evaluate(self, psgrid):
        """Kernel on the ``(xi, eta)`` dual grid of ``psgrid``."""
        if self.samples is not None:
            if self.grid != psgrid:
                raise ValueError("sampled kernel lives on a different phase-space grid")
            values = self.samples
        else:
            xi, eta = np.meshgrid(psgrid.xi, psgrid.y, indexing="ij")
            with np.errstate(over="ignore", invalid="ignore"):
                values = np.asarray(self(xi, eta, psgrid.hbar), dtype=complex)
            values = np.broadcast_to(values, psgrid.shape)
        if not np.all(np.isfinite(values)):
            raise KernelNotFinite(f"kernel {self.tag!r} is not finite on the dual grid")
        return values

    def series(self, hbar, order):
        """Coefficients ``c_k`` with ``f = sum c_k (xi eta)^k``."""
        if not self.is_builtin:
            raise UnsupportedKernel("custom kernels have no known power series")
        h = _exact(hbar)
        if self.tag == "wigner":
            return [QQi(1) if isinstance(h, QQi) else 1.0 + 0j] + [0 * h] * order
        if self.tag == "standard":
            return _series_exp(-QQi(0, 1) * h / 2 if isinstance(h, QQi) else -0.5j * h, order)
        if self.tag == "antistandard":
            return _series_exp(QQi(0, 1) * h / 2 if isinstance(h, QQi) else 0.5j * h, order)
        return _series_sinc(h / 2, order)

    def as_dict(self):
        return {"tag": self.tag, "description": self.description,
                "constraints": [bool(c) for c in self.constraints]}


def _standard(xi, eta, hbar):
    return np.exp(-0.5j * hbar * xi * eta)


def _antistandard(xi, eta, hbar):
    return np.exp(0.5j * hbar * xi * eta)


def _wigner(xi, eta, hbar):
    return np.ones(np.broadcast(xi, eta).shape, dtype=complex)


def _bornjordan(xi, eta, hbar):
    # np.sinc(t) = sin(pi t)/(pi t), equal to 1 at t = 0
    return np.sinc(hbar * np.asarray(xi) * np.asarray(eta) / (2 * np.pi)) + 0j


def _constraint_flags(kernel, tol=CONSTRAINT_TOL):
    if kernel.samples is not None:
        return _sampled_flags(kernel.samples, kernel.grid.dy, tol)
    hbar = 1.0
    xi = np.linspace(-20.0, 20.0, 401)
    with np.errstate(over="ignore", invalid="ignore"):
        f0 = np.asarray(kernel(xi, np.zeros_like(xi), hbar), dtype=complex)
    first = bool(np.all(np.isfinite(f0)) and np.max(np.abs(f0 - 1)) <= tol)
    # Richardson-extrapolated central difference in eta at the origin
    def d(h):
        return (complex(kernel(0.0, h, hbar)) - complex(kernel(0.0, -h, hbar))) / (2 * h)
    h = 1e-3
    slope = (4 * d(h / 2) - d(h)) / 3
    second = bool(np.isfinite(slope) and abs(slope) <= tol)
    return first, second


def _sampled_flags(samples, deta, tol):
    n, n_p = samples.shape
    j0 = n_p // 2
    first = bool(np.max(np.abs(samples[:, j0] - 1)) <= tol)
    slope = (samples[n // 2, j0 + 1] - samples[n // 2, j0 - 1]) / (2 * deta)
    second = bool(abs(slope) <= tol)
    return first, second


WIGNER = CohenKernel("wigner", _wigner, description="f = 1")
STANDARD = CohenKernel("standard", _standard, description="f = exp(-i hbar xi eta / 2)")
ANTISTANDARD = CohenKernel("antistandard", _antistandard, description="f = exp(+i hbar xi eta / 2)")
BORNJORDAN = CohenKernel("bornjordan", _bornjordan,
                         description="f = sin(hbar xi eta / 2) / (hbar xi eta / 2)")

BUILTIN = {k.tag: k for k in (WIGNER, STANDARD, ANTISTANDARD, BORNJORDAN)}

_ALIASES = {"w": "wigner", "weyl": "wigner", "s": "standard", "mehta": "standard",
            "as": "antistandard", "anti-standard": "antistandard", "anti_standard": "antistandard",
            "bj": "bornjordan", "born-jordan": "bornjordan", "born_jordan": "bornjordan"}


def kernel_by_name(name):
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in BUILTIN:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(BUILTIN)}")
    return BUILTIN[key]


def custom_kernel(func=None, samples=None, grid=None, description="custom"):
    """Custom kernel from a callable ``f(xi, eta)`` or an array sampled on
    the dual grid of ``grid`` (``xi`` rows, ``eta`` columns)."""
    return CohenKernel("custom", func=func, samples=samples, grid=grid, description=description)
