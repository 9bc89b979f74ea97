"""Gamma-matrix representations for 1, 2 and 3 space dimensions and the
exact per-mode evolution kernel of the massless Dirac equation.

Conventions: metric diag(+1, -1, ..., -1); fields are expanded as
``sum_p psi(p) exp(i p.x)``, so the momentum-space equation of motion is
``d/dt psi(p) = -i (g0 g.p) psi(p)`` and the kernel is
``exp(-i g0 g.p t)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA1, SIGMA2, SIGMA3)

# below this value of |p| t the sinc factor is evaluated by its series
SINC_SWITCH = 1e-8


@dataclass(frozen=True, eq=False)
class GammaSet:
    """A concrete representation of the Clifford algebra in n+1 dimensions.

    ``gammas[0]`` is the time-like matrix, ``gammas[1:]`` the space-like ones.
    """

    n: int
    dim: int
    gammas: tuple[np.ndarray, ...]
    metric: tuple[float, ...]

    @property
    def alphas(self) -> tuple[np.ndarray, ...]:
        """The products g0 g^j, j = 1..n (Hermitian for a valid set)."""
        g0 = self.gammas[0]
        return tuple(g0 @ gj for gj in self.gammas[1:])

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)


def spinor_dim(n: int) -> int:
    """Number of spinor components used for space dimension n."""
    if n not in (1, 2, 3):
        raise ValueError(f"unsupported space dimension n={n}; expected 1, 2 or 3")
    return 2 if n < 3 else 4


def make_gamma_set(n: int) -> GammaSet:
    """Return the fixed representation used throughout the package.

    n=1: g0 = s3, g1 = -i s2.
    n=2: g0 = s3, g1 = -i s2, g2 = i s1.
    n=3: Weyl (chiral) representation, g0 = [[0, 1], [1, 0]],
    gj = [[0, s_j], [-s_j, 0]].
    """
    dim = spinor_dim(n)
    if n == 1:
        gammas = (SIGMA3, -1j * SIGMA2)
    elif n == 2:
        gammas = (SIGMA3, -1j * SIGMA2, 1j * SIGMA1)
    else:
        zero = np.zeros((2, 2), dtype=complex)
        one = np.eye(2, dtype=complex)
        g0 = np.block([[zero, one], [one, zero]])
        gammas = (g0,) + tuple(np.block([[zero, s], [-s, zero]]) for s in PAULI)
    gammas = tuple(np.array(g, dtype=complex) for g in gammas)
    for g in gammas:
        g.setflags(write=False)
    metric = (1.0,) + (-1.0,) * n
    return GammaSet(n=n, dim=dim, gammas=gammas, metric=metric)


def clifford_residual(g: GammaSet) -> float:
    """Largest entry of |{g^mu, g^nu} - 2 eta^{mu nu} Id| over all index pairs."""
    ident = g.identity()
    worst = 0.0
    for mu, gm in enumerate(g.gammas):
        for nu, gn in enumerate(g.gammas):
            eta = g.metric[mu] if mu == nu else 0.0
            dev = gm @ gn + gn @ gm - 2.0 * eta * ident
            worst = max(worst, float(np.max(np.abs(dev))))
    return worst


def sinc_t(pnorm, t: float):
    """sin(|p| t) / |p| with the |p| -> 0 limit t, elementwise.

    Uses the series t (1 - (pt)^2/6) where |p| t < SINC_SWITCH.
    """
    pnorm = np.asarray(pnorm, dtype=float)
    x = pnorm * t
    small = np.abs(x) < SINC_SWITCH
    safe = np.where(small, 1.0, pnorm)
    return np.where(small, t * (1.0 - x * x / 6.0), np.sin(x) / safe)


def dirac_kernel_momentum(g: GammaSet, p, t: float) -> np.ndarray:
    """exp(-i g0 g.p t) for a single wave vector ``p``.

    Evaluated in closed form as ``cos(|p|t) Id - i (g0 g.p) sin(|p|t)/|p|``,
    which is exact because (g0 g.p)^2 = |p|^2 Id.
    """
    if t < 0:
        raise ValueError("the retarded kernel is defined for t >= 0 only")
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (g.n,):
        raise ValueError(f"expected a wave vector of length {g.n}, got shape {p.shape}")
    pnorm = float(np.sqrt(np.dot(p, p)))
    gen = sum(pj * aj for pj, aj in zip(p, g.alphas))
    return np.cos(pnorm * t) * g.identity() - 1j * float(sinc_t(pnorm, t)) * gen
