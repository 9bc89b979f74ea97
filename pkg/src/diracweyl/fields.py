"""Uniform periodic grids, field containers, initial data and file formats.

Grid layout: points ``x_m = -L/2 + m h`` for m = 0..N-1 on every axis, with
``h = L/N``.  Wavenumbers follow the FFT order, ``k = 2 pi fftfreq(N, h)``,
so the Nyquist mode carries k = -pi/h.  Field arrays are stored as
``(N,)*n`` for scalars and ``(c,) + (N,)*n`` for spinors, complex128.
"""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
import scipy.fft

from ._parallel import num_threads
from .clifford import spinor_dim

DUMP_MAGIC = b"HDW1"
_HEADER = struct.Struct("<4sIIdI")


@dataclass(frozen=True)
class Grid:
    n: int
    L: float
    N: int

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    @property
    def spectral_axes(self) -> tuple[int, ...]:
        """FFT axes of a scalar array (shift by one for spinor arrays)."""
        return tuple(range(self.n))

    @cached_property
    def axis(self) -> np.ndarray:
        return -0.5 * self.L + self.h * np.arange(self.N)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.h)

    def coords(self) -> list[np.ndarray]:
        """Open (broadcastable) coordinate arrays, one per axis."""
        return _open_mesh(self.axis, self.n)

    def kvecs(self) -> list[np.ndarray]:
        """Open (broadcastable) wavenumber arrays, one per axis."""
        return _open_mesh(self.wavenumbers, self.n)

    def knorm(self) -> np.ndarray:
        return np.sqrt(sum(k * k for k in self.kvecs()))

    def distance_from(self, center) -> np.ndarray:
        """Minimal-image distance of every grid point from ``center``."""
        center = _as_point(center, self.n)
        d2 = 0.0
        for x, c in zip(self.coords(), center):
            d = np.mod(x - c + 0.5 * self.L, self.L) - 0.5 * self.L
            d2 = d2 + d * d
        return np.sqrt(np.broadcast_to(d2, self.shape))


def _open_mesh(v: np.ndarray, n: int) -> list[np.ndarray]:
    out = []
    for ax in range(n):
        shape = [1] * n
        shape[ax] = v.size
        out.append(v.reshape(shape))
    return out


def _as_point(p, n: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.size == 1 and n > 1:
        p = np.full(n, float(p[0]))
    if p.shape != (n,):
        raise ValueError(f"expected a point with {n} coordinates, got {p.tolist()}")
    return p


def make_grid(n: int, L: float, N: int) -> Grid:
    if n not in (1, 2, 3):
        raise ValueError(f"unsupported dimension n={n}")
    if not L > 0:
        raise ValueError(f"box length must be positive, got L={L}")
    if N < 8 or N & (N - 1):
        raise ValueError(f"N must be a power of two >= 8, got N={N}")
    return Grid(n=int(n), L=float(L), N=int(N))


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ValueError(f"scalar field shape {vals.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def components(self) -> int:
        return 1

    def stacked(self) -> np.ndarray:
        return self.values[None]


@dataclass(frozen=True, eq=False)
class SpinorField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        c = spinor_dim(self.grid.n)
        if vals.shape != (c,) + self.grid.shape:
            raise ValueError(
                f"spinor field shape {vals.shape} does not match {(c,) + self.grid.shape}"
            )
        object.__setattr__(self, "values", vals)

    @property
    def components(self) -> int:
        return self.values.shape[0]

    def stacked(self) -> np.ndarray:
        return self.values


Field = Union[ScalarField, SpinorField]


@dataclass(frozen=True, eq=False)
class DiracData:
    """Cauchy data of the Dirac equation: the initial spinor."""

    psi0: SpinorField

    @property
    def grid(self) -> Grid:
        return self.psi0.grid


@dataclass(frozen=True, eq=False)
class KGData:
    """Cauchy data of the wave equation: initial value f and velocity g."""

    f: ScalarField
    g: ScalarField

    def __post_init__(self):
        if self.f.grid != self.g.grid:
            raise ValueError("f and g must live on the same grid")

    @property
    def grid(self) -> Grid:
        return self.f.grid


def bump_profile(r, a: float, amplitude: float = 1.0) -> np.ndarray:
    """A exp(1 - 1/(1 - (r/a)^2)) for r < a and exactly zero elsewhere."""
    r = np.asarray(r, dtype=float)
    s = (r / a) ** 2
    out = np.zeros(r.shape)
    inside = s < 1.0
    out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - s[inside]))
    return out


def smooth_bump(grid: Grid, center, a: float, amplitude: float = 1.0,
                component: int | None = None) -> Field:
    """Compactly supported C-infinity bump with peak ``amplitude``.

    Returns a ScalarField when ``component`` is None, otherwise a SpinorField
    carrying the bump in that component and zeros elsewhere.
    """
    if not 0 < a <= grid.L / 4:
        raise ValueError(f"bump radius must lie in (0, L/4] = (0, {grid.L / 4}], got {a}")
    prof = bump_profile(grid.distance_from(center), a, amplitude).astype(complex)
    if component is None:
        return ScalarField(grid, prof)
    c = spinor_dim(grid.n)
    if not 0 <= component < c:
        raise ValueError(f"component {component} out of range for a {c}-component spinor")
    vals = np.zeros((c,) + grid.shape, dtype=complex)
    vals[component] = prof
    return SpinorField(grid, vals)


def l2_norm(field: Field) -> float:
    v = field.stacked()
    return float(np.sqrt(field.grid.h**field.grid.n * np.vdot(v, v).real))


# spectral transforms over the spatial axes of (c, N, ..., N) arrays

def to_spectral(values: np.ndarray, n: int, overwrite: bool = False) -> np.ndarray:
    axes = tuple(range(values.ndim - n, values.ndim))
    return scipy.fft.fftn(values, axes=axes, overwrite_x=overwrite, workers=num_threads())


def to_physical(spec: np.ndarray, n: int, overwrite: bool = False) -> np.ndarray:
    axes = tuple(range(spec.ndim - n, spec.ndim))
    return scipy.fft.ifftn(spec, axes=axes, overwrite_x=overwrite, workers=num_threads())


def gradient(field: Field) -> np.ndarray:
    """Spectral gradient; returns an array of shape (n, c, N, ..., N)."""
    grid = field.grid
    spec = to_spectral(field.stacked(), grid.n)
    out = np.empty((grid.n,) + spec.shape, dtype=complex)
    for j, k in enumerate(grid.kvecs()):
        out[j] = to_physical(1j * k * spec, grid.n)
    return out


# file formats

def write_field(path, field: Field) -> None:
    """Binary dump: 'HDW1', u32 n, u32 N, f64 L, u32 components, then samples.

    Samples are the row-major (components, N, ..., N) array as little-endian
    (re, im) float64 pairs.
    """
    grid = field.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(DUMP_MAGIC, grid.n, grid.N, grid.L, field.components))
        fh.write(np.ascontiguousarray(field.stacked(), dtype="<c16").tobytes())


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, n, N, L, comps = _HEADER.unpack(head)
        if magic != DUMP_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        grid = make_grid(n, L, N)
        data = np.frombuffer(fh.read(), dtype="<c16")
    expected = comps * grid.size
    if data.size != expected:
        raise ValueError(f"{path}: expected {expected} samples, found {data.size}")
    vals = data.astype(complex).reshape((comps,) + grid.shape)
    if comps == 1:
        return ScalarField(grid, vals[0])
    return SpinorField(grid, vals)


def write_field_csv(path, field: Field) -> None:
    """CSV export of a 1D field: x, then re/im per component."""
    if field.grid.n != 1:
        raise ValueError("CSV export is only defined for 1D fields")
    v = field.stacked()
    header = ["x"]
    for c in range(v.shape[0]):
        header += [f"re{c}", f"im{c}"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, x in enumerate(field.grid.axis):
            row = [repr(float(x))]
            for c in range(v.shape[0]):
                row += [repr(float(v[c, i].real)), repr(float(v[c, i].imag))]
            w.writerow(row)
