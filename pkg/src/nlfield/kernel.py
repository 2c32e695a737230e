"""Compactly supported averaging kernel and its convolution paths.

The shipped kernel is the unit-support bump

    J(x) = c exp(-1/(1 - x^2))   on (-1, 1),   J = 0 outside,

sampled at grid offsets and normalized so the quadrature sum of the
samples is exactly 1.  Its derivative is evaluated analytically, so
differentiating a convolution reduces to convolving against J'.

Fields are extended by zero past the cut, so both convolutions agree
with the integral only on the interior (half_length - 1 from the cut);
use Grid1D.interior_mask when asserting against continuum identities.

convolve_direct is the quadratic-cost reference sum (the oracle the
fast path is tested against); convolve_fast is an FFT with zero padding
at least the kernel width, which removes circular wrap-around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import GridTooCoarseError
from .weighted_space import Grid1D, WeightedField

# spacing above this cannot resolve the unit-support bump
MAX_KERNEL_SPACING = 0.1


@dataclass(frozen=True, eq=False)
class Kernel:
    """Sampled kernel with cached norms and FFT spectra."""

    grid: Grid1D
    half_width: int
    samples: np.ndarray
    deriv_samples: np.ndarray
    norm_l1: float
    norm_sup: float
    deriv_norm_l1: float
    deriv_norm_sup: float
    _spectrum: np.ndarray = field(repr=False, default=None)
    _deriv_spectrum: np.ndarray = field(repr=False, default=None)
    _fft_len: int = field(repr=False, default=0)


def make_bump_kernel(grid: Grid1D) -> Kernel:
    """Build the normalized bump kernel sampled on the grid's offsets."""
    dx = grid.spacing
    if dx >= MAX_KERNEL_SPACING:
        raise GridTooCoarseError(
            f"grid spacing {dx:.4g} is too coarse for a unit-support kernel"
            f" (need < {MAX_KERNEL_SPACING})"
        )
    m = int(math.floor((1.0 - 1e-12) / dx))
    offsets = np.arange(-m, m + 1) * dx
    inside = np.abs(offsets) < 1.0
    raw = np.zeros_like(offsets)
    raw[inside] = np.exp(-1.0 / (1.0 - offsets[inside] ** 2))
    c = 1.0 / (raw.sum() * dx)
    samples = c * raw
    deriv = np.zeros_like(samples)
    deriv[inside] = -2.0 * offsets[inside] / (1.0 - offsets[inside] ** 2) ** 2 * samples[inside]

    n = grid.n_points
    fft_len = n + 2 * m
    spectrum = np.fft.rfft(samples, fft_len)
    deriv_spectrum = np.fft.rfft(deriv, fft_len)
    for arr in (samples, deriv, spectrum, deriv_spectrum):
        arr.setflags(write=False)

    return Kernel(
        grid=grid,
        half_width=m,
        samples=samples,
        deriv_samples=deriv,
        norm_l1=float(samples.sum() * dx),
        norm_sup=float(samples.max()),
        deriv_norm_l1=float(np.abs(deriv).sum() * dx),
        deriv_norm_sup=float(np.abs(deriv).max()),
        _spectrum=spectrum,
        _deriv_spectrum=deriv_spectrum,
        _fft_len=fft_len,
    )


def _check_space(kernel: Kernel, u: WeightedField) -> None:
    if kernel.grid != u.grid:
        from .errors import GridMismatchError

        raise GridMismatchError("kernel and field were sampled on different grids")


def convolve_direct(kernel: Kernel, u: WeightedField) -> WeightedField:
    """Reference convolution by direct summation, O(n * support)."""
    _check_space(kernel, u)
    out = _accel.conv_direct(u.values, kernel.samples, kernel.grid.spacing)
    return u.with_values(out)


def _fft_convolve(kernel: Kernel, u: WeightedField, spectrum: np.ndarray) -> WeightedField:
    n = kernel.grid.n_points
    m = kernel.half_width
    full = np.fft.irfft(np.fft.rfft(u.values, kernel._fft_len) * spectrum, kernel._fft_len)
    return u.with_values(full[m : m + n] * kernel.grid.spacing)


def convolve_fast(kernel: Kernel, u: WeightedField) -> WeightedField:
    """FFT convolution, zero padded past the kernel width (no wrap-around)."""
    _check_space(kernel, u)
    return _fft_convolve(kernel, u, kernel._spectrum)


def convolve_derivative(kernel: Kernel, u: WeightedField) -> WeightedField:
    """Spatial derivative of the convolution, computed as J' convolved with u."""
    _check_space(kernel, u)
    return _fft_convolve(kernel, u, kernel._deriv_spectrum)
