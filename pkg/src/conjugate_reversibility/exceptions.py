"""
Custom exceptions for the conjugate-reversibility toolkit.

Every exception carries the CLI exit code it maps to.
"""

from typing import Dict, Optional

import numpy as np


class ReversibilityError(Exception):
    """Base exception for all toolkit errors."""

    exit_code: int = 4


class InvalidInputError(ReversibilityError):
    """Raised when an argument violates an operation's precondition."""

    exit_code = 2


class MatrixParseError(InvalidInputError):
    """Raised when a matrix file is malformed."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = ""
        if row is not None:
            location = f" (row {row}"
            location += f", column {column})" if column is not None else ")"
        super().__init__(f"{message}{location}")
        self.row = row
        self.column = column


class NotSpecialLinearError(InvalidInputError):
    """Raised when a matrix tagged as a group element has det too far from 1."""

    exit_code = 3

    def __init__(self, det: complex, det_tol: float):
        super().__init__(
            f"Matrix is not in SL(n, C): det = {det.real:.6e}{det.imag:+.6e}j, "
            f"|det - 1| = {abs(det - 1):.3e} > det_tol = {det_tol:.1e}"
        )
        self.det = det
        self.det_tol = det_tol


class InvalidToleranceError(InvalidInputError):
    """Raised when a tolerance name or value is invalid."""
    pass


class InvalidPresetError(InvalidInputError):
    """Raised when an unknown tolerance preset is requested."""
    pass


class SolverFailureError(ReversibilityError):
    """Raised when the polynomial root finder does not converge."""

    def __init__(self, message: str, best_iterate: Optional[np.ndarray] = None):
        super().__init__(message)
        self.best_iterate = best_iterate


class SpectralAmbiguityError(ReversibilityError):
    """Raised when rank evidence contradicts a root cluster's multiplicity."""

    def __init__(self, message: str, eigenvalue: complex, multiplicity: int):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.multiplicity = multiplicity


class IllConditionedJordanError(ReversibilityError):
    """Raised when Jordan chains cannot be built to the requested residual."""

    def __init__(self, message: str, basis_condition: float):
        super().__init__(f"{message} (basis condition {basis_condition:.3e})")
        self.basis_condition = basis_condition


class AmbiguousPairingError(ReversibilityError):
    """Raised when more than one cluster qualifies as a conj-inverse partner."""
    pass


class NotReversibleError(ReversibilityError):
    """Raised when a reverser is requested for an element that is not c-reversible."""
    pass


class AssemblyFailureError(ReversibilityError):
    """Raised when an assembled reverser fails its residual checks."""

    def __init__(self, residuals: Dict[str, float], basis_condition: float, threshold: float):
        details = ", ".join(f"{name}={value:.3e}" for name, value in residuals.items())
        super().__init__(
            f"Assembled reverser rejected: {details} "
            f"(threshold {threshold:.3e}, basis condition {basis_condition:.3e})"
        )
        self.residuals = residuals
        self.basis_condition = basis_condition
        self.threshold = threshold


class TheoremPreconditionError(ReversibilityError):
    """Raised when a classification theorem is applied outside its hypothesis."""

    exit_code = 2


class NumericalInconsistencyError(ReversibilityError):
    """Raised when computed quantities contradict each other beyond tolerance."""

    exit_code = 5
