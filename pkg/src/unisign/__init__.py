"""Structure-preserving unitary sign decomposition and unitary eigensolver.

The sign iteration applies best unimodular rational approximants of
``sign(z)`` on two arcs of the unit circle, so every iterate stays unitary.
"""
from .approx import (ArcAngle, RationalSignApproximant, coefficients, evaluate, max_arc_error,
                     theta_update)
from .eig import UnitaryEigendecomposition, divide_and_conquer, invariant_subspaces, rotation_phase
from .elliptic import ModulusPair, complete_K, jacobi_scd, log_rho, rho
from .estimators import UnitaryEigensolver, UnitarySignDecomposition
from .exceptions import (BalanceError, ConvergenceError, DecouplingError, DivergenceError,
                         DomainError, PoleError, SingularityError, UnisignError)
from .linalg import UNIT_ROUNDOFF, check_unitary
from .sign import (BackwardErrors, IterationConfig, SignDecomposition, backward_errors,
                   direct_sign, newton_polar_sign, pade_sign, spectral_angle, zolo_sign)

__version__ = "0.1.0"

__all__ = [
    "ArcAngle", "RationalSignApproximant", "coefficients", "evaluate", "max_arc_error",
    "theta_update",
    "UnitaryEigendecomposition", "divide_and_conquer", "invariant_subspaces", "rotation_phase",
    "ModulusPair", "complete_K", "jacobi_scd", "log_rho", "rho",
    "UnitaryEigensolver", "UnitarySignDecomposition",
    "BalanceError", "ConvergenceError", "DecouplingError", "DivergenceError", "DomainError",
    "PoleError", "SingularityError", "UnisignError",
    "UNIT_ROUNDOFF", "check_unitary",
    "BackwardErrors", "IterationConfig", "SignDecomposition", "backward_errors", "direct_sign",
    "newton_polar_sign", "pade_sign", "spectral_angle", "zolo_sign",
]
