"""Periodic spectral calculus and a few finite-difference fallbacks.

All transforms follow numpy's FFT ordering unless a function says it
works on centred ("shifted") arrays.
"""

import math

import numpy as np


def wavenumbers(n, dx):
    """Angular wavenumbers in FFT order for ``n`` samples spaced ``dx``."""
    return 2.0 * np.pi * np.fft.fftfreq(n, d=dx)


def spectral_derivative(f, dx, order=1, axis=-1):
    """Derivative of a periodic, band-limited sampled function.

    The Nyquist coefficient is dropped for odd orders so that real input
    stays real.
    """
    f = np.asarray(f)
    n = f.shape[axis]
    k = wavenumbers(n, dx)
    factor = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        factor[n // 2] = 0.0
    shape = [1] * f.ndim
    shape[axis] = n
    out = np.fft.ifft(np.fft.fft(f, axis=axis) * factor.reshape(shape), axis=axis)
    if np.isrealobj(f):
        return out.real
    return out


def spectral_shift(f, dx, shift, axis=-1):
    """Evaluate ``f(x + shift)`` by trigonometric interpolation.

    ``shift`` may be a scalar or an array broadcasting against the
    remaining axes of ``f`` (one shift per row, for instance).  The Nyquist
    mode is interpolated with a cosine so real data stays real.
    """
    f = np.asarray(f)
    n = f.shape[axis]
    f = np.moveaxis(f, axis, -1)
    k = wavenumbers(n, dx)
    shift = np.asarray(shift, dtype=float)[..., None]
    phase = np.exp(1j * k * shift)
    if n % 2 == 0:
        phase[..., n // 2] = np.cos(k[n // 2] * shift[..., 0])
    out = np.fft.ifft(np.fft.fft(f, axis=-1) * phase, axis=-1)
    out = np.moveaxis(out, -1, axis)
    if np.isrealobj(f):
        return out.real
    return out


def upsample(f, factor=2):
    """Trigonometric upsampling of a periodic signal by an integer factor."""
    f = np.asarray(f, dtype=complex)
    n = f.size
    spec = np.fft.fft(f)
    big = np.zeros(n * factor, dtype=complex)
    half = n // 2
    big[:half] = spec[:half]
    big[-half:] = spec[-half:]
    # split the Nyquist coefficient symmetrically
    big[half] = 0.5 * spec[half]
    big[-half] = 0.5 * spec[half]
    return np.fft.ifft(big) * factor


def centered_fft(a, axis=-1):
    """DFT of an array whose index ``j`` stands for the offset ``j - n/2``.

    Returns ``sum_k a[k] exp(-2 pi i (k - n/2)(j - n/2) / n)`` at index j.
    """
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def centered_ifft(a, axis=-1):
    """Inverse of :func:`centered_fft` (includes the 1/n factor)."""
    return np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def fornberg_weights(z, x, m):
    """Finite-difference weights for derivatives up to order ``m`` at ``z``.

    ``x`` are the stencil nodes.  Returns an array ``c`` with ``c[k, j]``
    the weight of node ``j`` for the ``k``-th derivative (Fornberg 1988).
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def fd_derivative(f, dx, order=1, width=7):
    """Non-periodic finite-difference derivative on a uniform grid.

    Uses a ``width``-point stencil, centred in the interior and shifted
    (one-sided) near the ends, so it is exact on polynomials of degree
    below ``width``.
    """
    f = np.asarray(f)
    n = f.size
    if width > n:
        raise ValueError("stencil wider than the grid")
    half = width // 2
    out = np.empty_like(f, dtype=np.result_type(f, float))
    cache = {}
    for i in range(n):
        start = min(max(i - half, 0), n - width)
        offset = i - start
        if offset not in cache:
            nodes = np.arange(width) - offset
            cache[offset] = fornberg_weights(0.0, nodes, order)[order] / dx**order
        out[i] = cache[offset] @ f[start:start + width]
    return out


def is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0 and math.log2(n).is_integer()
