"""Off-grid evaluation of periodic grid fields.

Three methods are offered for point evaluation:

``exact``
    direct Fourier mode sum of the trigonometric interpolant; cost grows as
    N^n per point, so it is meant for small point sets and for checking.
``bandlimited``
    the trigonometric interpolant is resampled on a grid ``upsample`` times
    finer by zero padding, then read off with a periodic quintic B-spline.
    Agrees with ``exact`` to ~1e-6 relative for resolved data at a small
    fraction of the cost.  Default.
``trilinear``
    (multi)linear interpolation on the native grid; fast, low order.

The Nyquist coefficient is kept on the negative frequency -N/2, the same
convention used by the spectral engine.
"""
from __future__ import annotations

import numpy as np
import scipy.fft
from scipy import ndimage

from ._parallel import num_threads
from .fields import Grid

METHODS = ("bandlimited", "exact", "trilinear")


def _integer_shift(s: float, h: float) -> int | None:
    m = s / h
    r = round(m)
    if abs(m - r) <= 1e-9 * max(1.0, abs(m)):
        return int(r)
    return None


def shift_periodic(values: np.ndarray, s: float, grid: Grid) -> np.ndarray:
    """Samples of x -> v(x + s) for 1D periodic data along the last axis.

    Whole-cell shifts are exact index rolls; other shifts multiply the
    Fourier coefficients by exp(i k s).
    """
    if grid.n != 1:
        raise ValueError("shift_periodic works on 1D grids")
    m = _integer_shift(s, grid.h)
    if m is not None:
        return np.roll(values, -m, axis=-1)
    spec = scipy.fft.fft(values, axis=-1)
    spec *= np.exp(1j * grid.wavenumbers * s)
    return scipy.fft.ifft(spec, axis=-1)


def upsample(values: np.ndarray, factor: int) -> np.ndarray:
    """Trigonometric interpolant of an (N,)*n array sampled on a factor-times finer grid."""
    if factor == 1:
        return np.asarray(values, dtype=complex)
    n = values.ndim
    N = values.shape[0]
    M = factor * N
    spec = scipy.fft.fftn(values, workers=num_threads())
    idx = np.arange(N)
    dest = np.where(idx < N // 2, idx, idx + (M - N))
    big = np.zeros((M,) * n, dtype=complex)
    big[np.ix_(*([dest] * n))] = spec
    del spec
    out = scipy.fft.ifftn(big, overwrite_x=True, workers=num_threads())
    out *= float(factor) ** n
    return out


class PointInterpolator:
    """Evaluate one complex grid field at arbitrary points (shape (P, n))."""

    def __init__(self, values: np.ndarray, grid: Grid, method: str = "bandlimited",
                 upsample_factor: int | None = None, order: int = 5):
        if method not in METHODS:
            raise ValueError(f"unknown interpolation method {method!r}; choose from {METHODS}")
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape:
            raise ValueError(f"field shape {values.shape} does not match grid {grid.shape}")
        self.grid = grid
        self.method = method
        self._zero = not np.any(values)
        if self._zero:
            return
        if method == "exact":
            self._spec = scipy.fft.fftn(values, workers=num_threads()) / grid.size
            return
        if method == "bandlimited":
            factor = upsample_factor if upsample_factor is not None else (4 if grid.n < 3 else 2)
            data = upsample(values, factor)
            self._order = order
        else:
            factor = 1
            data = values
            self._order = 1
        self._h = grid.h / factor
        self._parts = []
        for part in (data.real, data.imag):
            if not np.any(part):
                self._parts.append(None)
                continue
            part = np.ascontiguousarray(part)
            if self._order > 1:
                part = ndimage.spline_filter(part, order=self._order, mode="grid-wrap")
            self._parts.append(part)

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.grid.n:
            raise ValueError(f"points must have {self.grid.n} coordinates")
        if self._zero:
            return np.zeros(len(pts), dtype=complex)
        if self.method == "exact":
            return self._mode_sum(pts)
        coords = ((pts + 0.5 * self.grid.L) / self._h).T
        out = np.zeros(len(pts), dtype=complex)
        for unit, part in zip((1.0, 1j), self._parts):
            if part is None:
                continue
            out += unit * ndimage.map_coordinates(part, coords, order=self._order,
                                                  mode="grid-wrap", prefilter=False)
        return out

    def _mode_sum(self, pts: np.ndarray) -> np.ndarray:
        k = self.grid.wavenumbers
        rel = pts + 0.5 * self.grid.L
        out = np.empty(len(pts), dtype=complex)
        for start in range(0, len(pts), 256):
            sl = slice(start, start + 256)
            phases = [np.exp(1j * np.outer(rel[sl, j], k)) for j in range(self.grid.n)]
            acc = self._spec
            # contract the last axis first, keeping the point index leading
            acc = np.tensordot(phases[-1], acc, axes=([1], [self.grid.n - 1]))
            for j in range(self.grid.n - 1):
                acc = np.einsum("pm,pm...->p...", phases[j], acc)
            out[sl] = acc
        return out
