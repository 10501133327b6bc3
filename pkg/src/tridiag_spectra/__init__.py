"""Tridiagonal representations of the radial wave operator and the spectra,
expansion coefficients and orthogonality densities that follow from them."""

__version__ = "0.1.0"

from .errors import (AccuracyError, DomainError, ParameterDomainError, TridiagError,
                     UnsupportedCaseError)
from .cases import CASES
from .tridiag import TridiagonalRep, build_rep, calibrate, overlap_matrix
from .spectra import closed_form_spectrum, diagonalization_conditions, numeric_spectrum
from .coeffs import closed_form_coeffs, solve_forward
from .density import estimate_density

__all__ = [
    "AccuracyError", "DomainError", "ParameterDomainError", "TridiagError",
    "UnsupportedCaseError", "CASES", "TridiagonalRep", "build_rep", "calibrate",
    "overlap_matrix", "closed_form_spectrum", "diagonalization_conditions",
    "numeric_spectrum", "closed_form_coeffs", "solve_forward", "estimate_density",
]
