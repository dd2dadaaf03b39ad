"""
Conjugate reversibility toolkit - decide whether g in SL(n, C) is conjugate to
conj(g)^-1, build a reverser when it is, and classify the element.

Example:
    >>> import numpy as np
    >>> from conjugate_reversibility import ReversibilityAnalyzer
    >>> report = ReversibilityAnalyzer().analyze(np.diag([2.0, 0.5]))
    >>> report.reversible
    True
"""

__version__ = "0.1.0"
__license__ = "MIT"

# Pipeline
from .analysis import (
    AnalysisReport,
    AnalysisRequest,
    Output,
    ReversibilityAnalyzer,
    emit_report,
    run_analyze,
    run_verify,
)

# Batch processing
from .batch import BatchAnalyzer, BatchItem

# Library modules
from .classification import (
    ClassificationReport,
    DynamicalType,
    ResultantClass,
    ResultantSign,
    SL4Decision,
    classify,
    classify_type,
    loxodromy_profile,
    polynomial_criterion,
    resultant_classify,
    sl4_classify,
    trace_bounded,
)
from .numerics import (
    BinomialIdentity,
    Polynomial,
    binomial_identity_check,
    c_dual,
    char_poly,
    is_c_reciprocal,
    poly_roots,
    resultant,
)
from .reversibility import (
    PairingResult,
    SymmetryWitness,
    assemble_reverser,
    build_pair_symmetry,
    build_unit_symmetry,
    choose_phase,
    factor_involutory,
    find_reverser,
    pairing_check,
    reverser_relation,
    verify_reverser,
)
from .spectral import JordanBlockSpec, SpectralData, eigen_structure, jordan_basis, jordan_matrix

# Input and configuration
from .matrix_io import load_matrix, parse_matrix
from .tolerances import PRESETS, ToleranceConfig, get_preset, list_presets

# Progress tracking
from .progress import ProgressCallback, ProgressTracker, create_log_callback, create_tqdm_callback

# Exceptions
from .exceptions import (
    AssemblyFailureError,
    IllConditionedJordanError,
    InvalidInputError,
    InvalidPresetError,
    InvalidToleranceError,
    MatrixParseError,
    NotReversibleError,
    NotSpecialLinearError,
    NumericalInconsistencyError,
    ReversibilityError,
    SolverFailureError,
    SpectralAmbiguityError,
    TheoremPreconditionError,
)

__all__ = [
    # Pipeline
    "AnalysisReport",
    "AnalysisRequest",
    "Output",
    "ReversibilityAnalyzer",
    "emit_report",
    "run_analyze",
    "run_verify",
    # Batch
    "BatchAnalyzer",
    "BatchItem",
    # Classification
    "ClassificationReport",
    "DynamicalType",
    "ResultantClass",
    "ResultantSign",
    "SL4Decision",
    "classify",
    "classify_type",
    "loxodromy_profile",
    "polynomial_criterion",
    "resultant_classify",
    "sl4_classify",
    "trace_bounded",
    # Numerics
    "BinomialIdentity",
    "Polynomial",
    "binomial_identity_check",
    "c_dual",
    "char_poly",
    "is_c_reciprocal",
    "poly_roots",
    "resultant",
    # Reversibility
    "PairingResult",
    "SymmetryWitness",
    "assemble_reverser",
    "build_pair_symmetry",
    "build_unit_symmetry",
    "choose_phase",
    "factor_involutory",
    "find_reverser",
    "pairing_check",
    "reverser_relation",
    "verify_reverser",
    # Spectral
    "JordanBlockSpec",
    "SpectralData",
    "eigen_structure",
    "jordan_basis",
    "jordan_matrix",
    # Input and configuration
    "load_matrix",
    "parse_matrix",
    "PRESETS",
    "ToleranceConfig",
    "get_preset",
    "list_presets",
    # Progress
    "ProgressCallback",
    "ProgressTracker",
    "create_log_callback",
    "create_tqdm_callback",
    # Exceptions
    "AssemblyFailureError",
    "IllConditionedJordanError",
    "InvalidInputError",
    "InvalidPresetError",
    "InvalidToleranceError",
    "MatrixParseError",
    "NotReversibleError",
    "NotSpecialLinearError",
    "NumericalInconsistencyError",
    "ReversibilityError",
    "SolverFailureError",
    "SpectralAmbiguityError",
    "TheoremPreconditionError",
]
