"""
Algebraic classification of SL(n, C) elements.

Dynamical type, loxodromy profile, the sign of the resultant R(chi, chi')
for c-reciprocal characteristic polynomials, and the trace-coefficient
decision tree for SL(4, C).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import (
    InvalidInputError,
    NumericalInconsistencyError,
    SolverFailureError,
    TheoremPreconditionError,
)
from .numerics import (
    ComplexMatrix,
    Polynomial,
    as_complex_matrix,
    char_poly,
    complex_pair,
    is_c_reciprocal,
    poly_roots,
    require_special_linear,
    resultant,
    sylvester_condition,
)
from .reversibility import PairingResult, pairing_check
from .spectral import SpectralData, eigen_structure, minimal_polynomial
from .tolerances import ToleranceConfig

logger = logging.getLogger(__name__)

_DEFAULTS = ToleranceConfig()

TENSION_WARNING = "polynomial-criterion: pass, pairing: fail"


class DynamicalType(str, Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    LOXODROMIC = "loxodromic"
    LOXOPARABOLIC = "loxoparabolic"


class ResultantSign(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


class ResultantClass(str, Enum):
    REGULAR_EVEN_LOXODROMIC = "regular-even-loxodromic"
    REGULAR_ODD_LOXODROMIC = "regular-odd-loxodromic"
    NOT_REGULAR = "not-regular"


@dataclass(frozen=True)
class LoxodromyProfile:
    """Eigenvalue pairs off the unit circle and unit-modulus eigenvalues.

    Attributes:
        r: Number of (lambda, conj(lambda)^-1) pairs, counted with multiplicity
        s: Number of unit-modulus eigenvalues, counted with multiplicity
        regular: True iff no eigenvalue is repeated
        pairs: (log-modulus, argument) of the outer member of each pair
        unit_arguments: Arguments of the unit-modulus eigenvalues
        complete: False when some non-unit eigenvalue has no partner
    """

    r: int
    s: int
    regular: bool
    pairs: Tuple[Tuple[float, float], ...] = ()
    unit_arguments: Tuple[float, ...] = ()
    complete: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "regular": self.regular,
            "pairs": [list(p) for p in self.pairs],
            "unit_arguments": list(self.unit_arguments),
            "complete": self.complete,
        }


@dataclass(frozen=True)
class ResultantEvaluation:
    """R(chi, chi') with the Sylvester conditioning its zero test was judged on."""

    value: complex
    sign: ResultantSign
    sylvester_condition: float


@dataclass(frozen=True)
class SL4Decision:
    """Trace-coefficient decision for an SL(4, C) element.

    ``path`` records each test as "label: outcome" in evaluation order.
    """

    verdict: bool
    branch: str
    path: Tuple[str, ...]
    coefficients: Tuple[complex, complex, complex]
    pairing_verdict: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        return self.pairing_verdict is None or self.pairing_verdict == self.verdict

    def to_dict(self) -> Dict[str, Any]:
        c1, c2, c3 = self.coefficients
        return {
            "verdict": self.verdict,
            "branch": self.branch,
            "path": list(self.path),
            "c1": complex_pair(c1),
            "c2": complex_pair(c2),
            "c3": complex_pair(c3),
            "pairing_verdict": self.pairing_verdict,
            "consistent": self.consistent,
        }


@dataclass(frozen=True)
class ClassificationReport:
    """Classification of one element, with the warnings raised on the way."""

    dynamical_type: DynamicalType
    profile: LoxodromyProfile
    resultant_value: complex
    resultant_sign: ResultantSign
    resultant_class: Optional[ResultantClass]
    polynomial_criterion: bool
    pairing_verdict: bool
    trace_bounded: bool
    sl4: Optional[SL4Decision] = None
    warnings: Tuple[str, ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dynamical_type": self.dynamical_type.value,
            "profile": self.profile.to_dict(),
            "resultant_value": complex_pair(self.resultant_value),
            "resultant_sign": self.resultant_sign.value,
            "resultant_class": self.resultant_class.value if self.resultant_class else None,
            "polynomial_criterion": self.polynomial_criterion,
            "pairing_verdict": self.pairing_verdict,
            "trace_bounded": self.trace_bounded,
            "sl4": self.sl4.to_dict() if self.sl4 else None,
            "warnings": list(self.warnings),
        }


def _is_unit(z: complex, unit_tol: float) -> bool:
    return abs(abs(z) - 1) <= unit_tol


def classify_type(S: SpectralData, unit_tol: Optional[float] = None) -> DynamicalType:
    """Map (semisimple, all eigenvalues unit modulus) to one of the four types."""
    unit_tol = _DEFAULTS.unit_tol if unit_tol is None else unit_tol
    all_unit = all(_is_unit(c.eigenvalue, unit_tol) for c in S.clusters)
    if S.semisimple:
        return DynamicalType.ELLIPTIC if all_unit else DynamicalType.LOXODROMIC
    return DynamicalType.PARABOLIC if all_unit else DynamicalType.LOXOPARABOLIC


def loxodromy_profile(
    S: SpectralData, unit_tol: Optional[float] = None, match_tol: Optional[float] = None
) -> LoxodromyProfile:
    """Count conj-inverse eigenvalue pairs (r) and unit eigenvalues (s)."""
    unit_tol = _DEFAULTS.unit_tol if unit_tol is None else unit_tol
    match_tol = _DEFAULTS.match_tol if match_tol is None else match_tol

    s = 0
    unit_arguments: List[float] = []
    outer: List[int] = []
    inner: List[int] = []
    for i, c in enumerate(S.clusters):
        if _is_unit(c.eigenvalue, unit_tol):
            s += c.multiplicity
            unit_arguments.extend([float(np.angle(c.eigenvalue))] * c.multiplicity)
        elif abs(c.eigenvalue) > 1:
            outer.append(i)
        else:
            inner.append(i)

    r = 0
    pairs: List[Tuple[float, float]] = []
    complete = True
    unmatched = set(inner)
    for i in outer:
        lam = S.clusters[i].eigenvalue
        target = 1.0 / np.conj(lam)
        candidates = [
            j
            for j in unmatched
            if abs(S.clusters[j].eigenvalue - target) <= match_tol * max(1.0, abs(target))
        ]
        if not candidates:
            complete = False
            continue
        j = min(candidates, key=lambda k: abs(S.clusters[k].eigenvalue - target))
        unmatched.discard(j)
        count = min(S.clusters[i].multiplicity, S.clusters[j].multiplicity)
        if S.clusters[i].multiplicity != S.clusters[j].multiplicity:
            complete = False
        r += count
        pairs.extend([(math.log(abs(lam)), float(np.angle(lam)))] * count)
    if unmatched:
        complete = False

    return LoxodromyProfile(
        r=r,
        s=s,
        regular=S.regular,
        pairs=tuple(pairs),
        unit_arguments=tuple(unit_arguments),
        complete=complete,
    )


def trace_bounded(S: SpectralData, unit_tol: Optional[float] = None) -> bool:
    """True iff every eigenvalue has modulus at most 1 + unit_tol."""
    unit_tol = _DEFAULTS.unit_tol if unit_tol is None else unit_tol
    return all(abs(c.eigenvalue) <= 1 + unit_tol for c in S.clusters)


def power_trace_bounded(A: ComplexMatrix, n_max: int = 100) -> bool:
    """Empirical check max_{k <= n_max} |tr A^k| <= n_max * dim, by repeated multiplication."""
    A = as_complex_matrix(A)
    limit = n_max * A.shape[0]
    power = np.eye(A.shape[0], dtype=np.complex128)
    for _ in range(n_max):
        power = power @ A
        trace = abs(complex(np.trace(power)))
        if not trace <= limit:
            return False
    return True


def _has_multiple_root(p: Polynomial, cluster_tol: Optional[float], root_noise: Optional[float]) -> bool:
    try:
        clusters = poly_roots(p, cluster_tol, root_noise=root_noise)
    except SolverFailureError:
        return True
    return any(c.multiplicity > 1 for c in clusters)


def evaluate_resultant(
    p: Polynomial,
    res_tol: Optional[float] = None,
    cluster_tol: Optional[float] = None,
    root_noise: Optional[float] = None,
) -> ResultantEvaluation:
    """R(p, p') and its sign.

    A well-conditioned Sylvester matrix (condition * res_tol < 1) gives a
    nonzero R outright. Past that, conditioning alone does not separate a
    repeated root from a large regular spectrum, so R counts as zero only
    when the roots of p also cluster into a multiple root.
    """
    res_tol = _DEFAULTS.res_tol if res_tol is None else res_tol
    if p.degree < 2:
        # constant derivative: R(p, p') = 1
        return ResultantEvaluation(complex(1.0), ResultantSign.POSITIVE, 1.0)
    derivative = p.derivative()
    condition = sylvester_condition(p, derivative)
    value = resultant(p, derivative)
    if value == 0:
        sign = ResultantSign.ZERO
    elif condition * res_tol >= 1.0 and _has_multiple_root(p, cluster_tol, root_noise):
        sign = ResultantSign.ZERO
    elif value.real > 0:
        sign = ResultantSign.POSITIVE
    else:
        sign = ResultantSign.NEGATIVE
    logger.debug("R(chi, chi') = %s (Sylvester condition %.3e): %s", value, condition, sign.value)
    return ResultantEvaluation(value, sign, condition)


def resultant_classify(
    A: ComplexMatrix,
    res_tol: Optional[float] = None,
    coeff_tol: Optional[float] = None,
    *,
    cluster_tol: Optional[float] = None,
    root_noise: Optional[float] = None,
) -> ResultantClass:
    """Regularity and loxodromy parity from the sign of R(chi, chi').

    Raises:
        TheoremPreconditionError: If chi_A is not c-reciprocal
        NumericalInconsistencyError: If R has a non-negligible imaginary part
    """
    res_tol = _DEFAULTS.res_tol if res_tol is None else res_tol
    coeff_tol = _DEFAULTS.coeff_tol if coeff_tol is None else coeff_tol
    p = char_poly(A)
    if not is_c_reciprocal(p, coeff_tol):
        raise TheoremPreconditionError(
            "resultant sign classification needs a c-reciprocal characteristic polynomial"
        )
    evaluation = evaluate_resultant(p, res_tol, cluster_tol, root_noise)
    if evaluation.sign is ResultantSign.ZERO:
        return ResultantClass.NOT_REGULAR

    value = evaluation.value
    # rounding in the determinant grows with the Sylvester conditioning
    relative = max(res_tol, 64 * np.finfo(float).eps * evaluation.sylvester_condition)
    allowed = relative * (1.0 + abs(value))
    if abs(value.imag) > allowed:
        raise NumericalInconsistencyError(
            f"resultant of a c-reciprocal polynomial has imaginary part {value.imag:.3e} "
            f"(allowed {allowed:.3e})"
        )
    if evaluation.sign is ResultantSign.POSITIVE:
        return ResultantClass.REGULAR_EVEN_LOXODROMIC
    return ResultantClass.REGULAR_ODD_LOXODROMIC


def eigenvalue_product_resultant(roots: Sequence[complex]) -> complex:
    """(-1)^(n(n-1)/2) prod_{i<j} (lambda_i - lambda_j)^2 over a root multiset."""
    roots = [complex(z) for z in roots]
    n = len(roots)
    value = complex(1.0)
    for i in range(n):
        for j in range(i + 1, n):
            value *= (roots[i] - roots[j]) ** 2
    return (-1) ** (n * (n - 1) // 2) * value


def polar_resultant_sign(profile: LoxodromyProfile) -> ResultantSign:
    """Sign predicted by the profile: (-1)^r for regular elements, zero otherwise."""
    if not profile.regular:
        return ResultantSign.ZERO
    return ResultantSign.POSITIVE if profile.r % 2 == 0 else ResultantSign.NEGATIVE


def polynomial_criterion(A: ComplexMatrix, S: SpectralData, coeff_tol: Optional[float] = None) -> bool:
    """Both the characteristic and the minimal polynomial are c-reciprocal."""
    coeff_tol = _DEFAULTS.coeff_tol if coeff_tol is None else coeff_tol
    return is_c_reciprocal(char_poly(A), coeff_tol) and is_c_reciprocal(
        minimal_polynomial(S), coeff_tol
    )


def sl4_coefficients(p: Polynomial) -> Tuple[complex, complex, complex]:
    """(c1, c2, c3) of chi = x^4 - c3 x^3 + c2 x^2 - c1 x + 1."""
    if p.degree != 4:
        raise InvalidInputError(f"trace coefficients need a degree-4 polynomial, got degree {p.degree}")
    a = p.coeffs
    return complex(-a[1]), complex(a[2]), complex(-a[3])


def sl4_classify(
    A: ComplexMatrix,
    tols: Optional[ToleranceConfig] = None,
    S: Optional[SpectralData] = None,
    pairing: Optional[PairingResult] = None,
) -> SL4Decision:
    """Trace-coefficient decision tree for c-reversibility in SL(4, C).

    The verdict is cross-checked against the Jordan pairing test; a
    disagreement is logged and flagged by ``SL4Decision.consistent``.

    Raises:
        InvalidInputError: If A is not 4 x 4
        NotSpecialLinearError: If det A is not 1 within det_tol
    """
    tols = tols or ToleranceConfig()
    A = as_complex_matrix(A)
    if A.shape != (4, 4):
        raise InvalidInputError(f"sl4 classification needs a 4 x 4 matrix, got {A.shape}")
    require_special_linear(A, tols.det_tol)

    c1, c2, c3 = sl4_coefficients(char_poly(A))
    path: List[str] = []

    if S is None:
        S = eigen_structure(A, tols)
    if pairing is None:
        pairing = pairing_check(S, tols.unit_tol, tols.match_tol)

    def decide(verdict: bool, branch: str) -> SL4Decision:
        decision = SL4Decision(verdict, branch, tuple(path), (c1, c2, c3), pairing.verdict)
        if not decision.consistent:
            logger.warning(
                "trace-coefficient verdict %s disagrees with pairing verdict %s (path %s)",
                verdict,
                pairing.verdict,
                " > ".join(path),
            )
        return decision

    scale = max(1.0, abs(c3))
    if abs(c3 - np.conj(c1)) > tols.coeff_tol * scale or abs(c2.imag) > tols.coeff_tol * max(1.0, abs(c2)):
        path.append("c-reciprocal-check: fail")
        return decide(False, "not-c-reciprocal")
    path.append("c-reciprocal-check: pass")

    if trace_bounded(S, tols.unit_tol):
        path.append("trace-bounded: yes")
        return decide(True, "trace-bounded")
    path.append("trace-bounded: no")

    degree = minimal_polynomial(S).degree
    path.append(f"minpoly-degree: {degree}")
    if degree != 3:
        return decide(True, "minpoly-degree")

    x, y = c3.real, c3.imag
    threshold = tols.coeff_tol * scale
    if abs(x) > threshold and abs(y) > threshold:
        path.append("trace-component: mixed")
        return decide(True, "mixed-trace")

    if abs(y) <= threshold:
        path.append("trace-component: real")
        target = c3.real ** 2 / 4 + 2
        branch = "real-trace"
    else:
        path.append("trace-component: imaginary")
        target = -(c3.imag ** 2) / 4 - 2
        branch = "imaginary-trace"

    if abs(c2 - target) <= tols.coeff_tol * max(1.0, abs(target)):
        path.append("c2-condition: equal")
        return decide(False, branch)
    path.append("c2-condition: differs")
    return decide(True, branch)


def classify(
    A: ComplexMatrix,
    tols: Optional[ToleranceConfig] = None,
    S: Optional[SpectralData] = None,
    pairing: Optional[PairingResult] = None,
) -> ClassificationReport:
    """Full classification report; SL(4) elements also get the trace-coefficient decision."""
    tols = tols or ToleranceConfig()
    A = as_complex_matrix(A)
    if S is None:
        S = eigen_structure(A, tols)
    if pairing is None:
        pairing = pairing_check(S, tols.unit_tol, tols.match_tol)

    warnings: List[str] = []
    profile = loxodromy_profile(S, tols.unit_tol, tols.match_tol)
    p = char_poly(A)
    evaluation = evaluate_resultant(p, tols.res_tol, tols.cluster_tol, tols.root_noise)

    if (evaluation.sign is ResultantSign.ZERO) != (not S.regular):
        warnings.append(
            f"resultant sign {evaluation.sign.value} disagrees with root clustering "
            f"(regular={S.regular})"
        )

    resultant_class: Optional[ResultantClass] = None
    try:
        resultant_class = resultant_classify(
            A, tols.res_tol, tols.coeff_tol, cluster_tol=tols.cluster_tol, root_noise=tols.root_noise
        )
    except TheoremPreconditionError as e:
        warnings.append(f"resultant class unavailable: {e}")

    criterion = polynomial_criterion(A, S, tols.coeff_tol)
    if criterion and not pairing.verdict:
        logger.warning("%s (%s)", TENSION_WARNING, pairing.obstruction)
        warnings.append(TENSION_WARNING)

    sl4: Optional[SL4Decision] = None
    if A.shape == (4, 4):
        det = complex(np.linalg.det(A))
        if abs(det - 1) <= tols.det_tol:
            sl4 = sl4_classify(A, tols, S, pairing)
            if not sl4.consistent:
                warnings.append(
                    f"sl4 verdict {sl4.verdict} disagrees with pairing verdict {pairing.verdict}"
                )
        else:
            warnings.append("sl4 decision skipped: det A is not 1")

    return ClassificationReport(
        dynamical_type=classify_type(S, tols.unit_tol),
        profile=profile,
        resultant_value=evaluation.value,
        resultant_sign=evaluation.sign,
        resultant_class=resultant_class,
        polynomial_criterion=criterion,
        pairing_verdict=pairing.verdict,
        trace_bounded=trace_bounded(S, tols.unit_tol),
        sl4=sl4,
        warnings=tuple(warnings),
    )
