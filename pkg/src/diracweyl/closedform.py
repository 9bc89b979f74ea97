"""Position-space solution formulas, independent of the spectral engine.

1D: light-cone shifts (Dirac) and d'Alembert's formula (wave equation).
2D: the Poisson-type disc integral with the inverse square-root weight
removed by the substitution rho = t sin(theta).
3D: Kirchhoff's spherical means.

In 2D and 3D each spinor component solves the wave equation with initial
value psi0 and initial velocity -(g0 g.grad) psi0, so the Dirac solution
only needs psi0 and its gradient under the respective averaging operator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import GammaSet
from .fields import (Grid, ScalarField, SpinorField, gradient, to_physical,
                     to_spectral)
from .interp import PointInterpolator, shift_periodic
from .propagator import dirac_green_1d


class WrapBoundError(ValueError):
    """The light cone of the initial support would wrap around the periodic box."""


@dataclass(frozen=True, eq=False)
class ProbeValues:
    """Solution samples: ``values[p, c]`` is component c at ``points[p]``."""

    t: float
    points: np.ndarray
    values: np.ndarray


def _require_dim(grid: Grid, n: int) -> None:
    if grid.n != n:
        raise ValueError(f"this engine works in n = {n}, got a field with n = {grid.n}")


# -- 1D --------------------------------------------------------------------

def evolve_dirac_1d(psi0: SpinorField, t: float) -> SpinorField:
    """psi(t) = 1/2 ((phi+chi)(x+t) + (phi-chi)(x-t), (phi+chi)(x+t) - (phi-chi)(x-t))."""
    grid = psi0.grid
    _require_dim(grid, 1)
    if t < 0:
        raise ValueError("t must be non-negative")
    phi, chi = psi0.values
    left = shift_periodic(phi + chi, t, grid)
    right = shift_periodic(phi - chi, -t, grid)
    return SpinorField(grid, np.stack([0.5 * (left + right), 0.5 * (left - right)]))


def propagate_with_D1(psi0: SpinorField, t: float) -> SpinorField:
    """Convolution of psi0 with the two shells of the 1D Dirac propagator."""
    grid = psi0.grid
    _require_dim(grid, 1)
    if t < 0:
        raise ValueError("t must be non-negative")
    total = None
    for pos, weight in dirac_green_1d(t):
        # a shell at x = pos picks up psi0(x - pos)
        src = shift_periodic(psi0.values, -pos, grid)
        part = np.stack([weight[a, 0] * src[0] + weight[a, 1] * src[1] for a in range(2)])
        total = part if total is None else total + part
    return SpinorField(grid, total)


def evolve_kg_1d(f: ScalarField, g: ScalarField, t: float) -> ScalarField:
    """d'Alembert: 1/2 (f(x+t) + f(x-t)) + 1/2 int_{x-t}^{x+t} g.

    The integral uses the periodic antiderivative of g - mean(g) (Fourier
    coefficients divided by ik) plus the linear contribution 2 t mean(g).
    """
    grid = f.grid
    _require_dim(grid, 1)
    if g.grid != grid:
        raise ValueError("f and g must share a grid")
    if t < 0:
        raise ValueError("t must be non-negative")
    k = grid.wavenumbers
    ghat = to_spectral(g.values, 1)
    mean = ghat[0] / grid.N
    ik = 1j * k
    ik[0] = 1.0
    prim_hat = ghat / ik
    prim_hat[0] = 0.0
    prim = to_physical(prim_hat, 1)
    avg = 0.5 * (shift_periodic(f.values, t, grid) + shift_periodic(f.values, -t, grid))
    integral = shift_periodic(prim, t, grid) - shift_periodic(prim, -t, grid) + 2.0 * t * mean
    return ScalarField(grid, avg + 0.5 * integral)


# -- shared helpers for 2D / 3D --------------------------------------------

def support_radius(field: SpinorField) -> float:
    """Radius of the smallest ball (around the covering-arc centre) holding the nonzero samples."""
    grid = field.grid
    mask = np.any(field.values != 0, axis=0)
    if not mask.any():
        return 0.0
    center = []
    for ax in range(grid.n):
        other = tuple(i for i in range(grid.n) if i != ax)
        occupied = np.flatnonzero(mask.any(axis=other) if other else mask)
        # the largest empty gap on the circle bounds the covering arc
        gaps = np.diff(np.concatenate([occupied, [occupied[0] + grid.N]]))
        j = int(np.argmax(gaps))
        start = occupied[(j + 1) % len(occupied)]
        length = grid.N - gaps[j]
        center.append(grid.axis[0] + grid.h * (start + 0.5 * length))
    dist = grid.distance_from(center)
    return float(dist[mask].max()) + grid.h


def _check_wrap(psi0: SpinorField, t: float, radius: float | None) -> None:
    a = support_radius(psi0) if radius is None else radius
    limit = 0.5 * psi0.grid.L - a
    if t > limit:
        raise WrapBoundError(f"t={t} exceeds the wrap bound L/2 - a = {limit:.6g}")


class _FieldSampler:
    """Point interpolators for psi0 and its spectral gradient, nonzero components only."""

    def __init__(self, psi0: SpinorField, method: str):
        grid = psi0.grid
        grad = gradient(psi0)
        self.components = [b for b in range(psi0.components) if np.any(psi0.values[b])]
        self.value = {b: PointInterpolator(psi0.values[b], grid, method) for b in self.components}
        self.grad = {(j, b): PointInterpolator(grad[j, b], grid, method)
                     for j in range(grid.n) for b in self.components}


def _prepare_points(points, n: int) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != n:
        raise ValueError(f"probe points need {n} coordinates")
    return pts


# -- 3D --------------------------------------------------------------------

def sphere_rule(n_theta: int = 32, n_phi: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors and weights (summing to 1) of a Gauss-Legendre x trapezoid sphere rule."""
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    st = np.sqrt(1.0 - x * x)
    dirs = np.stack([
        np.outer(st, np.cos(phi)).ravel(),
        np.outer(st, np.sin(phi)).ravel(),
        np.repeat(x, n_phi),
    ], axis=1)
    weights = np.repeat(0.5 * w, n_phi) / n_phi
    return dirs, weights


def evolve_dirac_3d(g: GammaSet, psi0: SpinorField, t: float, points,
                    sphere: tuple[int, int] = (32, 64), interpolation: str = "bandlimited",
                    radius: float | None = None) -> ProbeValues:
    """Kirchhoff evaluation at the given points.

    psi(t, x) = M[psi0] + t M[w.grad psi0] - t (g0 g^j) M[d_j psi0], where M
    averages over the sphere |y - x| = t and w is its outward normal; the
    first two terms are d/dt (t M[psi0]).
    """
    grid = psi0.grid
    _require_dim(grid, 3)
    if g.n != 3:
        raise ValueError("need the n = 3 gamma set")
    if not t > 0:
        raise ValueError("t must be positive")
    _check_wrap(psi0, t, radius)
    pts = _prepare_points(points, 3)
    dirs, weights = sphere_rule(*sphere)
    sampler = _FieldSampler(psi0, interpolation)
    alphas = g.alphas
    out = np.zeros((len(pts), psi0.components), dtype=complex)
    for start in range(0, len(pts), 64):
        chunk = pts[start:start + 64]
        ys = (chunk[:, None, :] + t * dirs[None, :, :]).reshape(-1, 3)
        shape = (len(chunk), len(dirs))
        mean = {}
        radial = {}
        dmean = {}
        for b in sampler.components:
            mean[b] = sampler.value[b](ys).reshape(shape) @ weights
            rad = np.zeros(shape, dtype=complex)
            for j in range(3):
                dj = sampler.grad[j, b](ys).reshape(shape)
                rad += dirs[None, :, j] * dj
                dmean[j, b] = dj @ weights
            radial[b] = rad @ weights
        block = np.zeros((len(chunk), psi0.components), dtype=complex)
        for b in sampler.components:
            block[:, b] += mean[b] + t * radial[b]
            for a in range(psi0.components):
                for j in range(3):
                    coef = alphas[j][a, b]
                    if coef != 0:
                        block[:, a] -= t * coef * dmean[j, b]
        out[start:start + 64] = block
    return ProbeValues(t=t, points=pts, values=out)


# -- 2D --------------------------------------------------------------------

def disc_rule(n_theta: int = 96, n_phi: int = 512) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes for the disc average with rho = t sin(theta).

    Returns (radial fraction sin(theta), direction unit vectors, weights) such
    that  1/(2 pi) int_{|z|<t} f(x+z) / sqrt(t^2 - |z|^2) dz
          ~= t * sum_q weights[q] f(x + t frac[q] dir[q]).
    """
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = 0.25 * np.pi * (x + 1.0)
    wt = 0.25 * np.pi * w
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    frac = np.repeat(np.sin(theta), n_phi)
    dirs = np.stack([np.tile(np.cos(phi), n_theta), np.tile(np.sin(phi), n_theta)], axis=1)
    weights = np.repeat(wt * np.sin(theta), n_phi) / n_phi
    return frac, dirs, weights


def evolve_dirac_2d(g: GammaSet, psi0: SpinorField, t: float, points,
                    disc: tuple[int, int] = (96, 512), interpolation: str = "bandlimited",
                    dt: float | None = None, radius: float | None = None) -> ProbeValues:
    """Disc-integral evaluation at the given points.

    psi(t, x) = d/dt B_t[psi0] - (g0 g^j) B_t[d_j psi0], with
    B_t[f](x) = 1/(2 pi) int_{|y-x|<t} f(y) / sqrt(t^2 - |y-x|^2) dy.
    The time derivative is a centred difference with step ``dt`` (default h/4).
    """
    grid = psi0.grid
    _require_dim(grid, 2)
    if g.n != 2:
        raise ValueError("need the n = 2 gamma set")
    dt = 0.25 * grid.h if dt is None else dt
    if not t > dt:
        raise ValueError(f"t must exceed the difference step {dt}")
    _check_wrap(psi0, t + dt, radius)
    pts = _prepare_points(points, 2)
    frac, dirs, weights = disc_rule(*disc)
    sampler = _FieldSampler(psi0, interpolation)
    alphas = g.alphas
    out = np.zeros((len(pts), psi0.components), dtype=complex)

    def disc_mean(interp, chunk, tau):
        ys = (chunk[:, None, :] + tau * frac[None, :, None] * dirs[None, :, :]).reshape(-1, 2)
        return tau * (interp(ys).reshape(len(chunk), -1) @ weights)

    for start in range(0, len(pts), 32):
        chunk = pts[start:start + 32]
        block = np.zeros((len(chunk), psi0.components), dtype=complex)
        for b in sampler.components:
            hi = disc_mean(sampler.value[b], chunk, t + dt)
            lo = disc_mean(sampler.value[b], chunk, t - dt)
            block[:, b] += (hi - lo) / (2.0 * dt)
            for j in range(2):
                bj = None
                for a in range(psi0.components):
                    coef = alphas[j][a, b]
                    if coef == 0:
                        continue
                    if bj is None:
                        bj = disc_mean(sampler.grad[j, b], chunk, t)
                    block[:, a] -= coef * bj
        out[start:start + 32] = block
    return ProbeValues(t=t, points=pts, values=out)
