"""Massless Dirac-Weyl and wave-equation Cauchy problems in 1, 2 and 3 dimensions.

Two independent evolution routes (exact momentum-space kernels and
position-space closed forms) plus diagnostics for Huygens' principle.
"""
from .clifford import GammaSet, clifford_residual, dirac_kernel_momentum, make_gamma_set
from .fields import (DiracData, Grid, KGData, ScalarField, SpinorField, l2_norm,
                     make_grid, read_field, smooth_bump, write_field)
from .propagator import ConvergenceError

__all__ = [
    "ConvergenceError", "DiracData", "GammaSet", "Grid", "KGData", "ScalarField",
    "SpinorField", "clifford_residual", "dirac_kernel_momentum", "l2_norm",
    "make_gamma_set", "make_grid", "read_field", "smooth_bump", "write_field",
]
__version__ = "0.1.0"
