"""Cohen-class quasi-distributions of a pure state.

Everything is computed through the mixed representation ``K(x, y)`` with
``y`` spaced by ``dx/hbar``, so the arguments ``x +- hbar y`` of the
bilinear form are grid points (or, for the symmetric Wigner form,
half-grid points reached by trigonometric upsampling).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateObservable, DivisionByVanishingKernel,
                     UnsupportedKernel, YRangeInsufficient)
from .grids import PhaseSpaceGrid, to_momentum
from .kernels import STANDARD, WIGNER
from .phasespace import (AmbiguityFunction, QuasiDistribution, ambiguity_to_mixed,
                         mixed_to_ambiguity, mixed_to_phase_space)
from .spectral import upsample

#: |f_source| below this counts as a kernel zero in gauge transforms.
KERNEL_ZERO = 1e-13


def default_grid(psi, psgrid=None):
    psgrid = psgrid or PhaseSpaceGrid(psi.grid, psi.hbar)
    if psgrid.spatial != psi.grid:
        raise ValueError("phase-space grid does not match the wavefunction grid")
    if psgrid.hbar != psi.hbar:
        raise ValueError("phase-space grid and wavefunction disagree on hbar")
    if psgrid.n_p > psi.grid.n:
        raise YRangeInsufficient(
            f"n_p = {psgrid.n_p} needs shifts hbar*y beyond half the domain (n = {psi.grid.n})")
    return psgrid


def _metadata(psi, **extra):
    md = {"source": psi.digest(), "hbar": psi.hbar, "mass": psi.mass}
    md.update(extra)
    return md


def standard_mixed(psi, psgrid):
    """``psi*(x) psi(x + hbar y)`` with periodic wrap."""
    v = psi.values
    idx = (np.arange(psi.grid.n)[:, None] + psgrid.y_steps[None, :]) % psi.grid.n
    return np.conj(v)[:, None] * v[idx]


def ambiguity(psi, psgrid=None):
    """Ambiguity function ``int dx psi*(x - hbar eta/2) psi(x + hbar eta/2) exp(i xi x)``.

    Substituting ``x -> x + hbar eta/2`` turns it into the standard-order
    mixed field times ``exp(i hbar xi eta / 2)``, which needs integer
    shifts only.
    """
    psgrid = default_grid(psi, psgrid)
    A = mixed_to_ambiguity(standard_mixed(psi, psgrid), psgrid)
    xi, eta = psgrid.xi[:, None], psgrid.y[None, :]
    return AmbiguityFunction(psgrid, A * np.exp(0.5j * psgrid.hbar * xi * eta))


def from_ambiguity(A, kernel, psgrid):
    """Phase-space field of ``A * f`` (no metadata)."""
    f = kernel.evaluate(psgrid)
    return mixed_to_phase_space(ambiguity_to_mixed(A * f, psgrid), psgrid)


def cohen_transform(psi, kernel, psgrid=None):
    psgrid = default_grid(psi, psgrid)
    A = ambiguity(psi, psgrid).values
    F = from_ambiguity(A, kernel, psgrid)
    return QuasiDistribution(psgrid, F, kernel, _metadata(psi, generated_by="cohen_transform"))


def wigner_direct(psi, psgrid=None):
    """Wigner function from its defining y-integral.

    ``psi`` is upsampled by two so the half shifts ``hbar y/2`` are grid
    points, and the y-integral is an explicit sum (no FFT), keeping this path
    independent of :func:`cohen_transform`.
    """
    psgrid = default_grid(psi, psgrid)
    n = psi.grid.n
    fine = upsample(psi.values, 2)
    s = psgrid.y_steps[None, :]
    i2 = 2 * np.arange(n)[:, None]
    K = np.conj(fine[(i2 - s) % (2 * n)]) * fine[(i2 + s) % (2 * n)]
    kernel = np.exp(-1j * np.outer(psgrid.y, psgrid.p))
    F = (K @ kernel) * psgrid.dy / (2 * np.pi)
    return QuasiDistribution(psgrid, F, WIGNER, _metadata(psi, generated_by="wigner_direct"))


def mehta(psi, psgrid=None):
    """Closed-form standard-order distribution ``psi*(x) phi(p) exp(i x p/hbar) / sqrt(2 pi hbar)``."""
    psgrid = default_grid(psi, psgrid)
    hbar, x, p = psi.hbar, psi.grid.x, psgrid.p
    if psgrid.n_p == psi.grid.n:
        phi = to_momentum(psi).values
    else:
        phase = np.exp(-1j * np.outer(p, x) / hbar)
        phi = psi.grid.dx / np.sqrt(2 * np.pi * hbar) * (phase @ psi.values)
    F = (np.conj(psi.values)[:, None] * phi[None, :]
         * np.exp(1j * np.outer(x, p) / hbar) / np.sqrt(2 * np.pi * hbar))
    return QuasiDistribution(psgrid, F, STANDARD, _metadata(psi, generated_by="mehta"))


def gauge_transform(F, target, atol=1e-12):
    """Change the kernel of ``F`` by multiplying ``f_target / f_source`` in
    the ambiguity plane."""
    g = F.grid
    if target is F.kernel:
        return F.with_values(F.values, target)
    A = F.ambiguity()
    f_src = F.kernel.evaluate(g)
    f_tgt = target.evaluate(g)
    small = np.abs(f_src) < KERNEL_ZERO
    ratio = np.ones_like(f_src)
    ratio[~small] = f_tgt[~small] / f_src[~small]
    if np.any(small):
        # A carries f_src, so estimate the bare ambiguity from the largest
        # neighbouring bare value
        bare = np.zeros(g.shape)
        bare[~small] = np.abs(A[~small] / f_src[~small])
        neigh = np.zeros(g.shape)
        for ax in (0, 1):
            for sh in (1, -1):
                neigh = np.maximum(neigh, np.roll(bare, sh, axis=ax))
        risk = neigh * np.abs(f_tgt)
        bad = small & (risk > atol)
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise DivisionByVanishingKernel(
                f"source kernel {F.kernel.tag!r} vanishes at xi={g.xi[i]:.4g}, "
                f"eta={g.y[j]:.4g} where the target needs {risk[i, j]:.2e}")
        ratio[small] = 0.0
    values = mixed_to_phase_space(ambiguity_to_mixed(A * ratio, g), g)
    return F.with_values(values, target, generated_by="gauge_transform")


@dataclass(frozen=True)
class MarginalReport:
    x: np.ndarray
    p: np.ndarray
    position: np.ndarray
    momentum: np.ndarray
    position_error: float = None
    momentum_error: float = None

    def ok(self, tol=1e-8):
        errs = [e for e in (self.position_error, self.momentum_error) if e is not None]
        return all(e <= tol for e in errs)


def marginals(F, psi=None):
    """``(int dp F, int dx F)``, compared against ``|psi|^2`` and ``|phi|^2``
    when the state is given."""
    g = F.grid
    Px = np.sum(F.values, axis=1) * g.dp
    Pp = np.sum(F.values, axis=0) * g.dx
    ex = ep = None
    if psi is not None:
        ex = float(np.max(np.abs(Px - psi.density)))
        if g.n_p == psi.grid.n:
            ep = float(np.max(np.abs(Pp - to_momentum(psi).density)))
    return MarginalReport(g.x, g.p, Px, Pp, ex, ep)


def expectation(F, symbol):
    """``int dx dp F(x, p) A(x, p)`` for a polynomial symbol in F's ordering."""
    X, P = np.meshgrid(F.grid.x, F.grid.p, indexing="ij")
    return complex(np.sum(F.values * symbol.evaluate(X, P)) * F.grid.dx * F.grid.dp)


def probability_linear(F, a, b, value):
    """Density of ``a x + b p`` at ``value`` for a Wigner distribution.

    Uses the characteristic function ``chi(k) = int F exp(i k (a x + b p))``
    sampled up to the band limit of the grid and inverted by a direct
    Fourier sum.
    """
    if a == 0 and b == 0:
        raise DegenerateObservable("a x + b p with a = b = 0 has no distribution")
    if F.kernel.tag != "wigner":
        raise UnsupportedKernel("linear-observable probabilities need the Wigner kernel")
    g = F.grid
    x, p = g.x, g.p
    kmax, width = np.inf, 0.0
    if a:
        kmax = min(kmax, np.pi / (abs(a) * g.dx))
        width += abs(a) * g.spatial.length
    if b:
        kmax = min(kmax, np.pi / (abs(b) * g.dp))
        width += abs(b) * g.n_p * g.dp
    dk = 2 * np.pi / width
    m = int(np.round(kmax / dk))
    k = (np.arange(2 * m) - m) * dk
    Ex = np.exp(1j * np.outer(k, a * x))
    Ep = np.exp(1j * np.outer(k, b * p))
    chi = np.sum((Ex @ F.values) * Ep, axis=1) * g.dx * g.dp
    v = np.atleast_1d(np.asarray(value, dtype=float))
    dens = (np.exp(-1j * np.outer(v, k)) @ chi).real * dk / (2 * np.pi)
    return dens if np.ndim(value) else float(dens[0])
