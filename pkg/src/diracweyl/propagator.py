"""Retarded Green functions of the massless wave operator.

Closed forms for n = 1, 2, 3 (convention: box G = -i delta), the 2x2 shell
weights of the 1D Dirac propagator, and the general-n representation of G
as an integral over the complex segment [-t - i eps, t - i eps], evaluated
numerically and extrapolated to eps -> 0.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import gamma as gamma_fn

DEFAULT_EPS_FACTORS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


class ConvergenceError(RuntimeError):
    """A quadrature or an eps-extrapolation did not reach its tolerance."""

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(f"{message} (achieved error {achieved:.3g})")
        self.achieved = achieved


@dataclass(frozen=True)
class GreenValue:
    """Value of a retarded propagator at (t, r).

    ``shell`` is the coefficient w(t) of delta(t - r); ``bulk`` is the
    ordinary density at (t, r).
    """

    shell: complex = 0j
    bulk: complex = 0j


@dataclass(frozen=True)
class RetardedPropagator:
    """A retarded propagator as shell weight w(t) plus bulk density b(t, r)."""

    n: int
    shell: Callable[[float], complex]
    bulk: Callable[[float, float], complex]

    def __call__(self, t: float, r: float) -> GreenValue:
        return GreenValue(shell=self.shell(t), bulk=self.bulk(t, r))


def _shell_none(t: float) -> complex:
    return 0j


def _bulk_none(t: float, r: float) -> complex:
    return 0j


def _bulk1(t: float, r: float) -> complex:
    return -0.5j if 0 <= r < t else 0j


def _bulk2(t: float, r: float) -> complex:
    if not 0 <= r < t:
        return 0j
    return -1j / (2 * math.pi * math.sqrt(t * t - r * r))


def _shell3(t: float) -> complex:
    return -1j / (4 * math.pi * t) if t > 0 else 0j


def retarded_propagator(n: int) -> RetardedPropagator:
    """G_R for the massless wave equation in n = 1, 2, 3 space dimensions.

    n=1: bulk -i/2 on |x| < t.  n=2: bulk -i / (2 pi sqrt(t^2 - r^2)) on
    r < t.  n=3: shell only, -i/(4 pi r) delta(t - r).
    """
    if n == 1:
        return RetardedPropagator(1, _shell_none, _bulk1)
    if n == 2:
        return RetardedPropagator(2, _shell_none, _bulk2)
    if n == 3:
        return RetardedPropagator(3, _shell3, _bulk_none)
    raise ValueError(f"closed-form propagator available for n = 1, 2, 3 only, got n={n}")


def green_kg(n: int, t: float, r: float) -> GreenValue:
    if t < 0 or r < 0:
        raise ValueError("t and r must be non-negative")
    return retarded_propagator(n)(t, r)


def dirac_green_1d(t: float) -> list[tuple[float, np.ndarray]]:
    """Shell positions and 2x2 weights of the 1D retarded Dirac propagator.

    D(t, x) = W_minus delta(x + t) + W_plus delta(x - t); returned as
    ``[(-t, W_minus), (t, W_plus)]``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    w_minus = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])
    w_plus = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    return [(-t, w_minus), (t, w_plus)]


# -- complex segment representation ---------------------------------------

def zeta_prefactor(n: int) -> float:
    """Normalisation of the segment integral, Gamma((n+1)/2) / (2 pi^((n+1)/2)).

    With this constant the eps -> 0 limit reproduces the closed forms of
    :func:`green_kg` (box G = -i delta).
    """
    m = 0.5 * (n + 1)
    return float(gamma_fn(m) / (2.0 * math.pi**m))


def _zeta_integrand_imag(s, n: int, r: float, eps: float):
    zeta = s - 1j * eps
    # factored form avoids cancellation in r^2 - zeta^2 near s = r
    base = (r - zeta) * (r + zeta)
    return (zeta * np.power(base, -0.5 * (n + 1))).imag


def zeta_integral_with_error(n: int, t: float, r: float, eps: float,
                             rtol: float = 1e-10) -> tuple[complex, float]:
    """Segment integral and QUADPACK's error estimate.

    Along zeta = s - i eps the integrand obeys f(-s) = -conj(f(s)), so the
    segment integral is 2i times the integral of Im f over [0, t]; that
    removes the cancelling real part before quadrature.  The absolute
    tolerance is ``rtol`` times the natural size t^(1-n) of the propagator.
    """
    if n < 2:
        raise ValueError("the segment representation is used for n >= 2")
    if not (t > 0 and r > 0 and eps > 0):
        raise ValueError("need t > 0, r > 0 and eps > 0")
    # breakpoints resolve the peak of width ~eps at s = r
    pts = sorted({p for k in (0, 1, 10, 100) for p in (r - k * eps, r + k * eps) if 0 < p < t})
    epsabs = rtol * t ** (1 - n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(_zeta_integrand_imag, 0.0, t, args=(n, r, eps),
                                  points=pts or None, limit=2000, epsabs=epsabs, epsrel=rtol)
    c = 2.0 * zeta_prefactor(n)
    if err > 10 * max(epsabs, rtol * abs(val)):
        raise ConvergenceError(f"segment quadrature n={n} t={t} r={r} eps={eps}", c * err)
    return 1j * c * val, c * err


def eval_zeta_integral(n: int, t: float, r: float, eps: float, rtol: float = 1e-10) -> complex:
    """G^(n)(t, r) regularised at finite eps, by adaptive quadrature."""
    return zeta_integral_with_error(n, t, r, eps, rtol)[0]


def zeta_antiderivative(n: int, t: float, r: float, eps: float) -> complex:
    """Same quantity as :func:`eval_zeta_integral` from the exact primitive.

    zeta (r^2 - zeta^2)^(-m) integrates to (r^2 - zeta^2)^(1-m) / (2(m-1));
    along the segment r^2 - zeta^2 never crosses the negative real axis, so
    the principal branch is continuous.  Used as an independent check.
    """
    m = 0.5 * (n + 1)
    if m == 1:
        raise ValueError("n = 1 has a logarithmic primitive; not supported here")

    def prim(z):
        return (r * r - z * z + 0j) ** (1.0 - m) / (2.0 * (m - 1.0))

    return zeta_prefactor(n) * (prim(t - 1j * eps) - prim(-t - 1j * eps))


@dataclass
class Extrapolation:
    limit: complex
    error: float
    eps: list[float] = field(default_factory=list)
    values: list[complex] = field(default_factory=list)
    monotone: bool = True


def richardson(eps: Sequence[float], values: Sequence[complex], floor: float = 0.0) -> Extrapolation:
    """Polynomial (Neville) extrapolation of values(eps) to eps = 0.

    The monotonicity guard requires |value - limit| to shrink over the last
    three eps; differences below ``floor`` count as converged.
    """
    eps = [float(e) for e in eps]
    vals = [complex(v) for v in values]
    if len(eps) < 2:
        raise ValueError("need at least two eps values")
    order = np.argsort(eps)[::-1]
    eps = [eps[i] for i in order]
    vals = [vals[i] for i in order]
    # Neville tableau evaluated at zero
    table = list(vals)
    diag = [table[-1]]
    m = len(eps)
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            e_hi, e_lo = eps[i - level], eps[i]
            table[i] = (e_hi * table[i] - e_lo * table[i - 1]) / (e_hi - e_lo)
        diag.append(table[-1])
    limit = diag[-1]
    error = abs(diag[-1] - diag[-2])
    dev = [abs(v - limit) for v in vals[-3:]]
    monotone = all(b <= a or b <= floor for a, b in zip(dev, dev[1:]))
    return Extrapolation(limit=limit, error=error, eps=eps, values=vals, monotone=monotone)


def usable_eps_factors(n: int, eps_factors: Sequence[float]) -> list[float]:
    """Drop eps/t factors whose quadrature is roundoff-limited.

    Near zeta = +-r the integrand grows like eps^(-(n+1)/2) while the
    integral stays O(1), so double precision loses about eps^(1-(n+1)/2)
    ulps.  Factors with f^((n-1)/2) < 1e-6 are skipped.
    """
    return [f for f in eps_factors if f ** (0.5 * (n - 1)) >= 1e-6]


def zeta_limit(n: int, t: float, r: float, eps_factors: Sequence[float] = DEFAULT_EPS_FACTORS,
               rtol: float = 1e-10) -> Extrapolation:
    """eps -> 0 limit of the segment integral over the schedule eps = factor * t.

    Schedule entries that are roundoff-limited or fail to converge are left
    out; at least three must remain.
    """
    eps, vals = [], []
    last_error = float("nan")
    for f in usable_eps_factors(n, eps_factors):
        try:
            vals.append(eval_zeta_integral(n, t, r, f * t, rtol))
            eps.append(f * t)
        except ConvergenceError as exc:
            last_error = exc.achieved
    if len(vals) < 3:
        raise ConvergenceError(f"fewer than three usable eps values for n={n} t={t} r={r}",
                               last_error)
    scale = max(max(abs(v) for v in vals), t ** (1 - n))
    ext = richardson(eps, vals, floor=1e-9 * scale)
    if not ext.monotone:
        raise ConvergenceError(f"eps extrapolation not monotone for n={n} t={t} r={r}", ext.error)
    return ext


def zeta_smear_test(t: float, testfn: Callable[[float], float], support: tuple[float, float],
                    eps_factors: Sequence[float] = (1e-1, 3e-2, 1e-2, 3e-3),
                    n: int = 3, rtol: float = 1e-9) -> Extrapolation:
    """Integral over r of testfn(r) G(t, r; eps), extrapolated to eps -> 0.

    For n = 3 the limit is the shell value -i testfn(t) / (4 pi t).
    ``support`` bounds the support of ``testfn`` and must lie in r > 0.
    """
    lo, hi = support
    if not 0 < lo < hi:
        raise ValueError("the test function must be supported in r > 0")
    vals = []
    eps_list = [f * t for f in eps_factors]
    for eps in eps_list:
        pts = sorted({p for k in (0, 1, 10) for p in (t - k * eps, t + k * eps) if lo < p < hi})

        def integrand(r, part, eps=eps):
            v = testfn(r)
            if v == 0.0:
                return 0.0
            g = eval_zeta_integral(n, t, r, eps, rtol)
            return (v * g).imag if part else (v * g).real

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            re = integrate.quad(integrand, lo, hi, args=(False,), points=pts or None,
                                limit=500, epsabs=1e-12, epsrel=1e-9)[0]
            im = integrate.quad(integrand, lo, hi, args=(True,), points=pts or None,
                                limit=500, epsabs=1e-12, epsrel=1e-9)[0]
        vals.append(complex(re, im))
    ext = richardson(eps_list, vals, floor=1e-9)
    if not ext.monotone:
        raise ConvergenceError("smeared eps extrapolation diverges", ext.error)
    return ext


@dataclass(frozen=True)
class SingularityReport:
    n: int
    kind: str  # "poles" or "branch_cuts"
    exponent: float

    def locations(self, r: float):
        """Pole positions, or the two cuts as (start, end) intervals."""
        if self.kind == "poles":
            return [-r, r]
        return [(-math.inf, -r), (r, math.inf)]


def classify_singularities(n: int) -> SingularityReport:
    """Poles at zeta = +-r for odd n, branch cuts from +-r outward for even n.

    The integrand carries (r^2 - zeta^2)^(-(n+1)/2): an integer power for odd
    n, a half-integer one for even n.
    """
    if n < 2:
        raise ValueError("singularity classification applies to n >= 2")
    exponent = 0.5 * (n + 1)
    kind = "poles" if exponent.is_integer() else "branch_cuts"
    return SingularityReport(n=n, kind=kind, exponent=exponent)


ZETA_CSV_COLUMNS = ("n", "t", "r", "eps", "re", "im", "est_error", "row", "status",
                    "green_re", "green_im")


def write_zeta_csv(path, rows: Sequence[dict]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=ZETA_CSV_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k, "") for k in ZETA_CSV_COLUMNS})
