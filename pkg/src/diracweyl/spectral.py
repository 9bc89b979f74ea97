"""Exact momentum-space evolution of the massless Dirac and wave equations.

Every discrete Fourier mode is advanced in one shot by its closed-form
kernel, so there is no time step and no accumulated error.  The per-mode
work is split into slabs along the first spatial axis and run on a thread
pool; each slab writes a disjoint part of the output and the arithmetic per
mode is fixed (cos term first, then the generator terms summed in the order
j = 1..n, b = 0..c-1), so results are bitwise identical for any thread count.
"""
from __future__ import annotations

import numpy as np

from ._parallel import for_each_slab
from .clifford import GammaSet, sinc_t
from .fields import (DiracData, Grid, KGData, ScalarField, SpinorField,
                     to_physical, to_spectral)


_ROWS = 16


def _alpha_apply(alphas, kv, psi: np.ndarray) -> np.ndarray:
    """sum_j k_j (g0 g^j) psi for psi of shape (c, ...), skipping zero entries."""
    c = psi.shape[0]
    out = np.zeros(psi.shape, dtype=complex)
    for a in range(c):
        for k, alpha in zip(kv, alphas):
            for b in range(c):
                coef = alpha[a, b]
                if coef != 0:
                    out[a] += coef * (k * psi[b])
    return out


def _check_dims(g: GammaSet, grid: Grid) -> None:
    if g.n != grid.n:
        raise ValueError(f"gamma set is for n={g.n} but the field lives in n={grid.n}")


def _as_spinor(data) -> SpinorField:
    return data.psi0 if isinstance(data, DiracData) else data


def apply_dirac_kernel(g: GammaSet, spec: np.ndarray, grid: Grid, t: float,
                       threads: int | None = None) -> None:
    """Multiply every mode of ``spec`` (shape (c, N, ..., N)) by exp(-i g0 g.p t), in place."""
    alphas = g.alphas
    kfull = grid.kvecs()

    def work(part):
        # bounded row chunks keep temporaries small on large 3D grids
        for start in range(part.start, part.stop, _ROWS):
            sl = slice(start, min(start + _ROWS, part.stop))
            kv = [kfull[0][sl]] + kfull[1:]
            pn = np.sqrt(sum(k * k for k in kv))
            block = spec[:, sl]
            gen = _alpha_apply(alphas, kv, block)
            spec[:, sl] = np.cos(pn * t) * block - 1j * sinc_t(pn, t) * gen

    for_each_slab(work, grid.N, threads)


def evolve_dirac(g: GammaSet, data, t: float, threads: int | None = None) -> SpinorField:
    """Solve the free Dirac Cauchy problem up to time ``t`` >= 0.

    ``data`` is a :class:`DiracData` (or directly the initial SpinorField).
    """
    psi0 = _as_spinor(data)
    grid = psi0.grid
    _check_dims(g, grid)
    if t < 0:
        raise ValueError("retarded evolution requires t >= 0")
    spec = to_spectral(psi0.values, grid.n)
    apply_dirac_kernel(g, spec, grid, t, threads)
    return SpinorField(grid, to_physical(spec, grid.n, overwrite=True))


def dirac_time_derivative(g: GammaSet, psi: SpinorField) -> SpinorField:
    """d/dt psi = -(g0 g.grad) psi, applied exactly in momentum space."""
    grid = psi.grid
    _check_dims(g, grid)
    spec = to_spectral(psi.values, grid.n)
    rate = -1j * _alpha_apply(g.alphas, grid.kvecs(), spec)
    return SpinorField(grid, to_physical(rate, grid.n))


def dirac_residual(g: GammaSet, psi: SpinorField, dpsi_dt: SpinorField) -> float:
    """L2 norm of i g^mu d_mu psi with spectral spatial derivatives."""
    grid = psi.grid
    _check_dims(g, grid)
    spec = to_spectral(psi.values, grid.n)
    res = np.einsum("ab,b...->a...", 1j * g.gammas[0], dpsi_dt.values)
    for j, k in enumerate(grid.kvecs(), start=1):
        dj = to_physical(1j * k * spec, grid.n)
        res += np.einsum("ab,b...->a...", 1j * g.gammas[j], dj)
    return float(np.sqrt(grid.h**grid.n * np.vdot(res, res).real))


class KGSolution:
    """Spectral solution of the massless wave equation for given (f, g).

    phi(t, p) = cos(|p| t) f(p) + sin(|p| t)/|p| g(p); the p = 0 mode uses
    the limit sin(|p| t)/|p| -> t.
    """

    def __init__(self, data: KGData):
        self.grid = data.grid
        self._fhat = to_spectral(data.f.values, self.grid.n)
        self._ghat = to_spectral(data.g.values, self.grid.n)
        self._pn = self.grid.knorm()

    def spectra(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Fourier coefficients of (phi, d phi/dt) at time t."""
        if t < 0:
            raise ValueError("retarded evolution requires t >= 0")
        pn = self._pn
        c = np.cos(pn * t)
        s = sinc_t(pn, t)
        phi = c * self._fhat + s * self._ghat
        rate = -(pn * pn) * s * self._fhat + c * self._ghat
        return phi, rate

    def at(self, t: float) -> ScalarField:
        return ScalarField(self.grid, to_physical(self.spectra(t)[0], self.grid.n))

    def velocity(self, t: float) -> ScalarField:
        return ScalarField(self.grid, to_physical(self.spectra(t)[1], self.grid.n))

    def energy(self, t: float) -> float:
        """1/2 ||d_t phi||^2 + 1/2 ||grad phi||^2, evaluated by Parseval."""
        phi, rate = self.spectra(t)
        grid = self.grid
        scale = grid.h**grid.n / grid.size
        grad2 = np.sum((self._pn**2) * np.abs(phi) ** 2)
        return float(0.5 * scale * (np.sum(np.abs(rate) ** 2) + grad2))


def evolve_kg(data: KGData, t: float) -> ScalarField:
    return KGSolution(data).at(t)


def _require_1d(grid: Grid) -> None:
    if grid.n != 1:
        raise ValueError(f"only defined for n = 1, got n = {grid.n}")


def _kg_pair_spectra(phi1: KGSolution, phi2: KGSolution, t: float):
    if phi1.grid != phi2.grid:
        raise ValueError("both wave solutions must share one grid")
    _require_1d(phi1.grid)
    k = phi1.grid.wavenumbers
    a, at = phi1.spectra(t)
    b, bt = phi2.spectra(t)
    # d_t^2 phi = d_x^2 phi for solutions of the wave equation
    att = -(k * k) * a
    btt = -(k * k) * b
    psi = np.stack([at - 1j * k * b, 1j * k * a - bt])
    rate = np.stack([att - 1j * k * bt, 1j * k * at - btt])
    return psi, rate


def dirac_from_kg_pair(phi1: KGSolution, phi2: KGSolution, t: float) -> SpinorField:
    """psi = (d_t phi1 - d_x phi2, d_x phi1 - d_t phi2), i.e. slash-d applied to (phi1, phi2)."""
    psi, _ = _kg_pair_spectra(phi1, phi2, t)
    return SpinorField(phi1.grid, to_physical(psi, 1))


def kg_pair_rate(phi1: KGSolution, phi2: KGSolution, t: float) -> SpinorField:
    """Time derivative of :func:`dirac_from_kg_pair`, from the kernels themselves."""
    _, rate = _kg_pair_spectra(phi1, phi2, t)
    return SpinorField(phi1.grid, to_physical(rate, 1))


def kg_constraint_initial_derivative(psi0: SpinorField) -> tuple[ScalarField, ScalarField]:
    """Initial velocities (d_x psi2, d_x psi1) forced on each component by the Dirac equation."""
    grid = psi0.grid
    _require_1d(grid)
    k = grid.wavenumbers
    spec = to_spectral(psi0.values, 1)
    g1 = to_physical(1j * k * spec[1], 1)
    g2 = to_physical(1j * k * spec[0], 1)
    return ScalarField(grid, g1), ScalarField(grid, g2)
