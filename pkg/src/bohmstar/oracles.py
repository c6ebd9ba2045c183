"""Slow reference computations used to derive test data.

Nothing here shares code with the fast paths: quadratures are explicit
trapezoid sums, off-grid values of a sampled state come from its explicit
Fourier series, and operator orderings are reduced word by word.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import hashlib
import itertools
import json
import math
import os

import numpy as np
from scipy.integrate import trapezoid

from .grids import PhysicalConstants
from .symbols import PolynomialSymbol, QQi


@dataclass(frozen=True)
class OracleResult:
    tag: str
    inputs: str
    value: object
    resolution: dict = field(default_factory=dict)


def _digest(*parts):
    return hashlib.sha256(repr(parts).encode()).hexdigest()[:16]


def _as_callable(psi):
    """Continuous evaluator of a state: callables pass through, sampled
    states are summed as explicit Fourier series."""
    if callable(psi):
        return psi, {}
    grid, v = psi.grid, np.asarray(psi.values)
    n = grid.n
    j = np.arange(n)
    k = 2 * np.pi * np.where(j < n // 2, j, j - n) / grid.length
    coeff = np.array([np.sum(v * np.exp(-2j * np.pi * jj * j / n)) for jj in j]) / n
    nyq = n // 2

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape, dtype=complex)
        for m in range(n):
            if m == nyq:
                out += coeff[m] * np.cos(k[m] * (x - grid.x_min))
            else:
                out += coeff[m] * np.exp(1j * k[m] * (x - grid.x_min))
        return out

    return f, {"fourier_modes": n}


def oracle_wigner_quadrature(psi, x, p, hbar=None, y_max=None, n_y=4001):
    """``(1/2pi) int dy exp(-i y p) psi*(x - hbar y/2) psi(x + hbar y/2)`` by
    the trapezoid rule on ``[-y_max, y_max]``."""
    f, res = _as_callable(psi)
    if hbar is None:
        hbar = getattr(psi, "hbar", 1.0)
    if y_max is None:
        y_max = getattr(getattr(psi, "grid", None), "length", 40.0) / hbar
    y = np.linspace(-y_max, y_max, n_y)
    integrand = np.exp(-1j * y * p) * np.conj(f(x - hbar * y / 2)) * f(x + hbar * y / 2)
    value = complex(trapezoid(integrand, y) / (2 * np.pi))
    res = dict(res, y_max=float(y_max), n_y=int(n_y))
    return OracleResult("wigner_quadrature", _digest(x, p, hbar), value, res)


def oracle_ambiguity_quadrature(psi, xi, eta, hbar=None, x_range=None, n_x=4001):
    """``int dx psi*(x - hbar eta/2) psi(x + hbar eta/2) exp(i xi x)`` by the trapezoid rule."""
    f, res = _as_callable(psi)
    if hbar is None:
        hbar = getattr(psi, "hbar", 1.0)
    if x_range is None:
        g = psi.grid
        x_range = (g.x_min, g.x_max)
    x = np.linspace(*x_range, n_x)
    integrand = np.conj(f(x - hbar * eta / 2)) * f(x + hbar * eta / 2) * np.exp(1j * xi * x)
    value = complex(trapezoid(integrand, x))
    res = dict(res, x_range=list(map(float, x_range)), n_x=int(n_x))
    return OracleResult("ambiguity_quadrature", _digest(xi, eta, hbar), value, res)


# --- operator words ---------------------------------------------------------

def _exact(h):
    return QQi(h) if isinstance(h, (int, Fraction)) else h


def _reduce(word_map, hbar, first):
    """Rewrite every word so that all ``first`` letters come before the other one."""
    other = "p" if first == "x" else "x"
    # p x = x p - i hbar and x p = p x + i hbar
    swap = -QQi(0, 1) * hbar if first == "x" else QQi(0, 1) * hbar
    done = {}
    todo = dict(word_map)
    while todo:
        word, c = todo.popitem()
        pos = next((i for i in range(len(word) - 1)
                    if word[i] == other and word[i + 1] == first), None)
        if pos is None:
            done[word] = done.get(word, 0) + c
            continue
        swapped = word[:pos] + first + other + word[pos + 2:]
        shorter = word[:pos] + word[pos + 2:]
        for w, cc in ((swapped, c), (shorter, c * swap)):
            todo[w] = todo.get(w, 0) + cc
    return {w: c for w, c in done.items() if c}


def _counts(word):
    return word.count("x"), word.count("p")


def _symmetrized(a, b):
    words = set("".join(w) for w in itertools.permutations("x" * a + "p" * b))
    weight = Fraction(1, math.comb(a + b, a))
    return {w: QQi(weight) for w in words}


def oracle_ordering(m, n, ordering="weyl", hbar=1, word=None):
    """Symbol of the operator ``x^m p^n`` (or of an arbitrary ``word`` such
    as ``"pxp"``) in the given ordering: standard, antistandard or weyl."""
    hbar = _exact(hbar)
    if word is None:
        word = "x" * m + "p" * n
    ops = {word: QQi(1)}
    if ordering in ("standard", "antistandard"):
        first = "x" if ordering == "standard" else "p"
        reduced = _reduce(ops, hbar, first)
        return PolynomialSymbol({_counts(w): c for w, c in reduced.items()})
    if ordering != "weyl":
        raise ValueError(f"unknown ordering {ordering!r}")
    remaining = _reduce(ops, hbar, "x")
    symbol = {}
    while remaining:
        w = max(remaining, key=lambda s: (len(s), s))
        c = remaining[w]
        a, b = _counts(w)
        symbol[(a, b)] = symbol.get((a, b), 0) + c
        sym_ops = _reduce(_symmetrized(a, b), hbar, "x")
        for ww, cc in sym_ops.items():
            remaining[ww] = remaining.get(ww, 0) - c * cc
        remaining = {k: v for k, v in remaining.items() if v}
    return PolynomialSymbol(symbol)


# --- closed-form free Gaussian ------------------------------------------------

@dataclass(frozen=True)
class GoldenGaussian:
    """Free Gaussian packet (centred at 0 at t = 0) in closed form."""

    t: float
    sigma0: float = 1.0
    p0: float = 0.0
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    @property
    def u(self):
        return self.p0 / self.constants.mass

    def sigma(self, t=None):
        t = self.t if t is None else t
        h, m, s0 = self.constants.hbar, self.constants.mass, self.sigma0
        return np.sqrt(s0**2 + (h * t / (2 * m * s0)) ** 2)

    def psi(self, x):
        h, m, s0 = self.constants.hbar, self.constants.mass, self.sigma0
        st = s0 * (1 + 1j * h * self.t / (2 * m * s0**2))
        xc = np.asarray(x, dtype=float) - self.u * self.t
        return (2 * np.pi * st**2) ** -0.25 * np.exp(
            -xc**2 / (4 * s0 * st) + 1j / h * self.p0 * (xc + 0.5 * self.u * self.t))

    def R(self, x):
        s = self.sigma()
        xc = np.asarray(x, dtype=float) - self.u * self.t
        return (2 * np.pi * s**2) ** -0.25 * np.exp(-xc**2 / (4 * s**2))

    def S(self, x):
        h, m, s0, t = self.constants.hbar, self.constants.mass, self.sigma0, self.t
        xc = np.asarray(x, dtype=float) - self.u * t
        return (-(h / 2) * np.arctan(h * t / (2 * m * s0**2))
                + self.p0 * (np.asarray(x, dtype=float) - self.u * t / 2)
                + h**2 * t * xc**2 / (8 * m * s0**2 * self.sigma() ** 2))

    def dS(self, x):
        h, m, s0, t = self.constants.hbar, self.constants.mass, self.sigma0, self.t
        xc = np.asarray(x, dtype=float) - self.u * t
        return self.p0 + h**2 * t * xc / (4 * m * s0**2 * self.sigma() ** 2)

    def quantum_potential(self, x):
        h, m, s = self.constants.hbar, self.constants.mass, self.sigma()
        xc = np.asarray(x, dtype=float) - self.u * self.t
        # R''/R = xc^2/(4 s^4) - 1/(2 s^2)
        return -(h**2) / (2 * m) * (xc**2 / (4 * s**4) - 1 / (2 * s**2))

    def wigner(self, x, p):
        h, m, s0 = self.constants.hbar, self.constants.mass, self.sigma0
        xs = np.asarray(x, dtype=float) - np.asarray(p, dtype=float) * self.t / m
        return (np.exp(-xs**2 / (2 * s0**2)) * np.exp(-2 * s0**2 * (np.asarray(p) - self.p0) ** 2 / h**2)
                / (np.pi * h))

    def trajectory(self, x0, t):
        t = np.asarray(t, dtype=float)
        return self.u * t + x0 * self.sigma(t) / self.sigma0


def golden_gaussian(t, constants=None, sigma0=1.0, p0=0.0):
    return GoldenGaussian(float(t), sigma0, p0, constants or PhysicalConstants())


# --- golden files -----------------------------------------------------------

def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def write_golden(path, oracle, inputs, outputs, resolution):
    doc = {"oracle": oracle, "inputs": _jsonable(inputs),
           "outputs": _jsonable(outputs), "resolution": _jsonable(resolution)}
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def load_golden(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    missing = {"oracle", "inputs", "outputs", "resolution"} - set(doc)
    if missing:
        raise ValueError(f"golden file {path} lacks {sorted(missing)}")
    return doc
