"""Causal form of admissible quasi-distributions and its semiclassical checks.

The causal form is built along the standard-order route: the sandwich
``R *' delta_*'(p - S') *' R`` gives the standard-order distribution, and a
gauge transform carries it to any admissible kernel.
"""

from dataclasses import dataclass, field
import json

import numpy as np
from scipy.interpolate import CubicSpline

from .bohm import BohmDistribution
from .cohen import cohen_transform, gauge_transform
from .errors import KernelConstraintsViolated
from .grids import PhaseSpaceGrid, PhysicalConstants
from .spectral import fd_derivative, spectral_shift
from .star import sandwich_standard


def verify_kernel_constraints(kernel):
    """``(f(xi, 0) == 1, df/deta(0, 0) == 0)`` checked to 1e-10."""
    return tuple(bool(c) for c in kernel.constraints)


def causal_form(pf, kernel, psgrid=None):
    flags = verify_kernel_constraints(kernel)
    if not all(flags):
        raise KernelConstraintsViolated(
            f"kernel {kernel.tag!r} fails the admissibility constraints {flags}")
    F = gauge_transform(sandwich_standard(pf, psgrid), kernel)
    return F.with_values(F.values, kernel, generated_by="causal_form")


@dataclass(frozen=True)
class CausalFormReport:
    kernel: str
    linf: float
    l2: float
    constraints: tuple
    grid: dict
    hbar: float
    skipped: str = None

    def passed(self, threshold=1e-8):
        return self.skipped is None and self.linf <= threshold

    def as_dict(self):
        d = {"kernel": self.kernel, "linf": self.linf, "l2": self.l2,
             "constraints": list(self.constraints), "grid": self.grid, "hbar": self.hbar}
        if self.skipped:
            d["skipped"] = self.skipped
        return d

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def verify_theorem(psi, pf, kernel, psgrid=None):
    """Compare the causal form built from ``pf`` with the direct transform of ``psi``."""
    psgrid = psgrid or PhaseSpaceGrid(psi.grid, psi.hbar)
    flags = verify_kernel_constraints(kernel)
    if not all(flags):
        return CausalFormReport(kernel.tag, float("nan"), float("nan"), flags,
                                psgrid.as_dict(), psi.hbar,
                                skipped="kernel fails the admissibility constraints")
    diff = causal_form(pf, kernel, psgrid).values - cohen_transform(psi, kernel, psgrid).values
    linf = float(np.max(np.abs(diff)))
    l2 = float(np.sqrt(np.sum(np.abs(diff) ** 2) * psgrid.dx * psgrid.dp))
    return CausalFormReport(kernel.tag, linf, l2, flags, psgrid.as_dict(), psi.hbar)


@dataclass(frozen=True)
class ExpansionReport:
    """Deviation between the Wigner and Bohm y-kernels for several hbar."""

    hbars: np.ndarray
    deviations: np.ndarray
    slope: float
    intercept: float
    cubic_coefficients: np.ndarray
    y_window: float
    x_probe: float = None
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        return {"hbars": list(map(float, self.hbars)),
                "deviations": list(map(float, self.deviations)),
                "slope": self.slope, "intercept": self.intercept,
                "cubic_coefficients": list(map(float, self.cubic_coefficients)),
                "y_window": self.y_window, "x_probe": self.x_probe}


def hbar_expansion_check(pf, hbars, y_window=1.0, n_y=65):
    """Scale of ``F^W - F^B`` in the mixed representation as hbar varies.

    ``R`` and ``S`` are held fixed while hbar changes.  For each hbar the
    Wigner y-kernel ``R(x - a) R(x + a) exp(i/hbar [S(x + a) - S(x - a)])``,
    ``a = hbar y / 2``, is compared with the Bohm one ``R(x)^2 exp(i y S'(x))``
    on ``|y| <= y_window``.  ``R`` is shifted spectrally and ``S`` is read
    off a not-a-knot cubic spline over the unmasked region (exact for phases
    up to cubic order).

    The report also carries, per hbar, the least-squares coefficient ``c``
    of ``hbar^2 y^3`` in the phase defect at the maximum of ``R``; the
    expansion predicts ``c = S'''/24``.
    """
    hbars = np.asarray(hbars, dtype=float)
    x = pf.grid.x
    sup = pf.support
    spline = CubicSpline(x[sup], pf.S[sup])
    lo, hi = x[sup][0], x[sup][-1]
    R = pf.R
    dS = spline(x, 1)
    y = np.linspace(-y_window, y_window, n_y)
    probe = int(np.argmax(R))
    devs, cubic = [], []
    for hbar in hbars:
        worst = 0.0
        phase_defect = []
        for yy in y:
            a = 0.5 * hbar * yy
            ok = (x - abs(a) >= lo) & (x + abs(a) <= hi)
            Rm = spectral_shift(R, pf.grid.dx, -a)
            Rp = spectral_shift(R, pf.grid.dx, a)
            xs = x[ok]
            dphase = (spline(xs + a) - spline(xs - a)) / hbar
            wig = Rm[ok] * Rp[ok] * np.exp(1j * dphase)
            bohm = R[ok] ** 2 * np.exp(1j * yy * dS[ok])
            if xs.size:
                worst = max(worst, float(np.max(np.abs(wig - bohm))))
            phase_defect.append((spline(x[probe] + a) - spline(x[probe] - a)) / hbar
                                - yy * dS[probe])
        devs.append(worst)
        y3 = hbar**2 * y**3
        cubic.append(float(np.dot(y3, phase_defect) / np.dot(y3, y3)))
    devs = np.array(devs)
    if np.all(devs > 0) and hbars.size >= 2:
        slope, intercept = np.polyfit(np.log(hbars), np.log(devs), 1)
    else:
        slope = intercept = float("nan")
    return ExpansionReport(hbars, devs, float(slope), float(intercept), np.array(cubic),
                           y_window, float(x[probe]))


def classical_limit_distribution(grid, R_cl, S_cl, constants=None):
    """Classical pure state ``R_cl^2 delta(p - S_cl')`` in section form.

    ``R_cl`` and ``S_cl`` are arrays on ``grid`` or callables of ``x``; the
    section comes from 7-point finite differences of ``S_cl``.
    """
    x = grid.x
    R = np.asarray(R_cl(x) if callable(R_cl) else R_cl, dtype=float)
    S = np.asarray(S_cl(x) if callable(S_cl) else S_cl, dtype=float)
    return BohmDistribution(grid, R**2, fd_derivative(S, grid.dx, 1),
                            constants or PhysicalConstants())
