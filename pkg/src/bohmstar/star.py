"""Star products on polynomial symbols and the grid star-delta constructions.

Polynomial products use the general bidifferential form

    A * B = sum_{r,s} alpha^r beta^s / (r! s!) (d_x^r d_p^s A)(d_x^s d_p^r B)

with ``(alpha, beta)`` fixed by the ordering (see :data:`STAR_KINDS`).

Grid constructions live in the mixed representation with the convention
``F(x, p) = (1/2pi) int dy exp(-i y p) B(x, y)``.  In it the standard-order
star-delta of ``p - S'(x)`` is ``exp(i/hbar [S(x + hbar y) - S(x)])`` and
multiplying by a p-free factor on the right shifts that factor's argument by
``hbar y``.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import UnsupportedKernel, YRangeInsufficient
from .grids import PhaseSpaceGrid
from .kernels import STANDARD, series_product, series_reciprocal
from .phasespace import MixedField, QuasiDistribution
from .spectral import fd_derivative, upsample
from .symbols import I, P, X, PolynomialSymbol, QQi, as_symbol

STAR_KINDS = ("weyl", "standard", "antistandard", "standard_dual")


def _scalar(v):
    if isinstance(v, (int, Fraction)):
        return QQi(v)
    if isinstance(v, QQi):
        return v
    return complex(v)


def _kind_params(kind, hbar):
    h = _scalar(hbar)
    i = I if isinstance(h, QQi) else 1j
    if kind == "weyl":
        return i * h / 2, -i * h / 2
    if kind == "standard":
        return 0 * h, -i * h
    if kind == "antistandard":
        return i * h, 0 * h
    if kind == "standard_dual":
        return 0 * h, i * h
    raise ValueError(f"unknown star product kind {kind!r}; choose from {STAR_KINDS}")


def poly_star(A, B, kind="weyl", hbar=1):
    """Star product of two polynomial symbols (terminating series)."""
    A, B = as_symbol(A), as_symbol(B)
    alpha, beta = _kind_params(kind, hbar)
    out = PolynomialSymbol()
    for r in range(min(A.degree_x, B.degree_p) + 1):
        if r and not alpha:
            break
        for s in range(min(A.degree_p, B.degree_x) + 1):
            if s and not beta:
                break
            left = A.derivative(r, s)
            right = B.derivative(s, r)
            if not left.terms or not right.terms:
                continue
            coeff = alpha**r * beta**s / (math.factorial(r) * math.factorial(s))
            out = out + (left * right) * coeff
    return out


def moyal_bracket(A, B, hbar=1):
    return poly_star(A, B, "weyl", hbar) - poly_star(B, A, "weyl", hbar)


def poisson_bracket(A, B):
    A, B = as_symbol(A), as_symbol(B)
    return A.derivative(1, 0) * B.derivative(0, 1) - A.derivative(0, 1) * B.derivative(1, 0)


def symbol_transform(A, source, target, hbar=1):
    """Re-express a symbol of ordering ``source`` in ordering ``target``.

    Applies ``f_target^{-1} f_source`` with ``(xi eta)^k`` acting as
    ``(-1)^k d_x^k d_p^k``; the series stops at the symbol's degree.
    """
    A = as_symbol(A)
    if not (source.is_builtin and target.is_builtin):
        raise UnsupportedKernel("symbol transforms need kernels with a known power series")
    if source is target:
        return A
    order = min(A.degree_x, A.degree_p)
    g = series_product(source.series(hbar, order), series_reciprocal(target.series(hbar, order), order), order)
    out = PolynomialSymbol()
    for k, c in enumerate(g):
        if c:
            out = out + A.derivative(k, k) * (c * (-1) ** k)
    return out


@dataclass(frozen=True)
class StarDeltaExpansion:
    """Weyl star-delta of ``A`` to second order in hbar.

    ``delta_*(A) = delta(A) - hbar^2/8 Theta1 delta''(A) - hbar^2/24 Theta2 delta'''(A)``.
    The two fields are symbols when ``A`` is polynomial and arrays otherwise.
    """

    argument: object
    theta1: object
    theta2: object
    hbar: object
    order: int = 2
    coefficients: tuple = (("delta''", "-hbar^2/8 * theta1"), ("delta'''", "-hbar^2/24 * theta2"))

    def is_ordinary(self, tol=0.0):
        vals = []
        for t in (self.theta1, self.theta2):
            if isinstance(t, PolynomialSymbol):
                vals.append(0.0 if not t.terms else max(abs(complex(c)) for _, c in t))
            else:
                vals.append(float(np.nanmax(np.abs(t))) if np.size(t) else 0.0)
        return max(vals) <= tol


def weyl_delta_thetas(A):
    """``(Theta1, Theta2)`` for a polynomial delta argument ``A(x, p)``."""
    A = as_symbol(A)
    Ax, Ap = A.derivative(1, 0), A.derivative(0, 1)
    Axx, Axp, App = A.derivative(2, 0), A.derivative(1, 1), A.derivative(0, 2)
    theta1 = Axx * App - Axp * Axp
    theta2 = Axx * Ap * Ap - Axp * Ax * Ap * 2 + App * Ax * Ax
    return theta1, theta2


def star_delta_weyl_expansion(S, hbar=1, grid=None):
    """Expansion of the Weyl star-delta of ``p - S'(x)``.

    ``S`` may be a p-free :class:`PolynomialSymbol` (exact result), a
    :class:`~bohmstar.bohm.PolarFields` (spectral log-derivative of the
    state) or a real array sampled on ``grid`` (7-point finite differences).
    """
    if isinstance(S, PolynomialSymbol):
        if not S.is_p_free():
            raise ValueError("the phase S must not depend on p")
        arg = P - S.derivative(1, 0)
        t1, t2 = weyl_delta_thetas(arg)
        return StarDeltaExpansion(arg, t1, t2, _scalar(hbar))
    if hasattr(S, "phase_derivative"):
        s1, s3 = S.phase_derivative(1), S.phase_derivative(3)
    else:
        if grid is None:
            raise ValueError("a sampled phase needs its grid")
        S = np.asarray(S, dtype=float)
        s1 = fd_derivative(S, grid.dx, 1)
        s3 = fd_derivative(S, grid.dx, 3)
    return StarDeltaExpansion(s1, np.zeros_like(s3), -s3, hbar)


def _check_range(pf, psgrid):
    if psgrid.spatial != pf.grid:
        raise ValueError("phase-space grid does not match the polar fields")
    if psgrid.n_p > pf.grid.n:
        raise YRangeInsufficient(
            f"hbar*y_max = {psgrid.n_p // 2 * pf.grid.dx:.4g} exceeds the grid half-width "
            f"{pf.grid.length / 2:.4g}")


def _shift_table(n, psgrid):
    idx = np.arange(n)[:, None] + psgrid.y_steps[None, :]
    inside = (idx >= 0) & (idx < n)
    return np.clip(idx, 0, n - 1), inside


def _grid_for(pf, psgrid):
    psgrid = psgrid or PhaseSpaceGrid(pf.grid, pf.hbar)
    if psgrid.hbar != pf.hbar:
        raise ValueError("phase-space grid and polar fields disagree on hbar")
    _check_range(pf, psgrid)
    return psgrid


def star_delta_standard(pf, psgrid=None):
    """Standard-order star-delta of ``p - S'(x)`` as a mixed field.

    The exponent series of derivatives of S is resummed into the shifted
    difference ``S(x + hbar y) - S(x)``; samples whose shifted point leaves
    the grid are undefined (stored as zero).
    """
    psgrid = _grid_for(pf, psgrid)
    idx, inside = _shift_table(pf.grid.n, psgrid)
    S = pf.S
    D = np.exp(1j / pf.hbar * (S[idx] - S[:, None]))
    return MixedField(psgrid, np.where(inside, D, 0.0), inside)


def sandwich_standard(pf, psgrid=None):
    """``R *' delta_*'(p - S') *' R`` in standard order, returned in (x, p).

    The left factor multiplies pointwise and the right one is evaluated at
    ``x + hbar y``.
    """
    psgrid = _grid_for(pf, psgrid)
    D = star_delta_standard(pf, psgrid)
    idx, inside = _shift_table(pf.grid.n, psgrid)
    R = pf.R
    K = R[:, None] * D.values * np.where(inside, R[idx], 0.0)
    F = MixedField(psgrid, K, inside).to_phase_space()
    md = {"hbar": pf.hbar, "mass": pf.constants.mass, "generated_by": "sandwich_standard"}
    return QuasiDistribution(psgrid, F, STANDARD, md)


def star_delta_weyl(pf, psgrid=None, support=1e-3):
    """Phase of the symmetric bilinear form, ``exp(i/hbar [S(x + hbar y/2) - S(x - hbar y/2)])``.

    This is the Weyl star-delta of ``p - S'(x)`` in the mixed
    representation.  Half shifts come from the upsampled state, so the
    field is defined only where ``R(x +- hbar y/2) >= support * max R``.
    """
    psgrid = _grid_for(pf, psgrid)
    n = pf.grid.n
    fine = upsample(pf.recombine(), 2)
    s = psgrid.y_steps[None, :]
    i2 = 2 * np.arange(n)[:, None]
    lo, hi = (i2 - s), (i2 + s)
    inside = (lo >= 0) & (hi < 2 * n)
    a, b = fine[lo % (2 * n)], fine[hi % (2 * n)]
    floor = support * np.max(pf.R)
    ok = inside & (np.abs(a) >= floor) & (np.abs(b) >= floor)
    prod = np.conj(a) * b
    with np.errstate(invalid="ignore", divide="ignore"):
        D = np.where(ok, prod / np.abs(prod), 0.0)
    return MixedField(psgrid, D, ok)


def genvalue_residuals(D, pf, support=1e-2, width=9):
    """Left and right star-genvalue residuals of a standard star-delta.

    In the mixed picture ``p *' D`` reads ``-i dD/dy + i hbar dD/dx`` and
    ``D *' p`` reads ``-i dD/dy``; they should equal ``S'(x) D`` and
    ``S'(x + hbar y) D``.  Derivatives are finite differences; the maxima
    are taken where both ``R(x)`` and ``R(x + hbar y)`` exceed
    ``support * max R``.
    """
    g = D.grid
    hbar = pf.hbar
    B = D.values
    dBdy = np.apply_along_axis(fd_derivative, 1, B, g.dy, 1, width)
    dBdx = np.apply_along_axis(fd_derivative, 0, B, g.dx, 1, width)
    s1 = pf.phase_derivative(1)
    idx, inside = _shift_table(pf.grid.n, g)
    floor = support * np.max(pf.R)
    region = inside & (pf.R[:, None] >= floor) & (pf.R[idx] >= floor)
    half = width // 2
    region[:half] = region[-half:] = False
    region[:, :half] = region[:, -half:] = False
    s1x = np.nan_to_num(s1)[:, None]
    s1y = np.nan_to_num(s1)[idx]
    left = -1j * dBdy + 1j * hbar * dBdx - s1x * B
    right = -1j * dBdy - s1y * B
    return float(np.max(np.abs(left[region]))), float(np.max(np.abs(right[region])))
