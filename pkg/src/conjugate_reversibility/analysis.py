"""
Analysis pipeline: polynomials, spectral data, pairing, reverser and
classification for one matrix, gathered into a serializable report.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Union

import numpy as np

from .classification import (
    TENSION_WARNING,
    ClassificationReport,
    SL4Decision,
    classify,
    polynomial_criterion,
    sl4_classify,
)
from .exceptions import InvalidInputError, ReversibilityError
from .matrix_io import load_matrix
from .numerics import (
    ComplexMatrix,
    Polynomial,
    as_complex_matrix,
    char_poly,
    require_special_linear,
)
from .reversibility import (
    PairingResult,
    ReverserRelation,
    SymmetryWitness,
    assemble_reverser,
    pairing_check,
    reverser_relation,
    verify_reverser,
)
from .spectral import SpectralData, eigen_structure, minimal_polynomial
from .tolerances import PRESETS, ToleranceConfig, get_preset
from .utils import format_complex

logger = logging.getLogger(__name__)

# Jordan bases beyond this condition number get a warning in the report
ILL_CONDITIONED_BASIS = 1e6


class Output(str, Enum):
    PAIRING = "pairing"
    WITNESS = "witness"
    CLASSIFY = "classify"
    SL4 = "sl4"
    POLYNOMIAL_CRITERION = "polynomial-criterion"


ALL_OUTPUTS: FrozenSet[Output] = frozenset(Output)


def parse_outputs(names: Iterable[Union[str, Output]]) -> FrozenSet[Output]:
    try:
        return frozenset(Output(name) for name in names)
    except ValueError as e:
        raise InvalidInputError(f"{e}. Known outputs: {', '.join(o.value for o in Output)}")


@dataclass(frozen=True)
class AnalysisRequest:
    """One matrix plus how to judge it.

    Attributes:
        matrix: The element to analyze
        tolerance_overrides: Named tolerances replacing the preset's values
        outputs: Which parts of the pipeline to report
        preset: Tolerance preset name
        sl_check: Require |det - 1| <= det_tol
        source: Where the matrix came from, echoed in the report
    """

    matrix: np.ndarray = field(compare=False, repr=False)
    tolerance_overrides: Mapping[str, float] = field(default_factory=dict)
    outputs: FrozenSet[Output] = ALL_OUTPUTS
    preset: str = "default"
    sl_check: bool = True
    source: Optional[str] = None

    def __post_init__(self) -> None:
        # Reject unknown names before any work is done
        ToleranceConfig().with_overrides(self.tolerance_overrides)
        object.__setattr__(self, "outputs", parse_outputs(self.outputs))

    def echo(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "n": int(np.shape(self.matrix)[0]) if np.ndim(self.matrix) else None,
            "preset": self.preset,
            "outputs": sorted(o.value for o in self.outputs),
            "tolerance_overrides": dict(sorted(self.tolerance_overrides.items())),
            "sl_check": self.sl_check,
        }


@dataclass
class AnalysisReport:
    """Everything computed for one request.

    Attributes:
        request: Echo of the request
        tolerances: Every tolerance the verdicts were judged against
        error: Stage, exception type and message of a pipeline failure
        exit_code: 0 when analyzed, otherwise the failure's exit code
    """

    request: Dict[str, Any]
    tolerances: Dict[str, Any]
    characteristic_polynomial: Optional[Polynomial] = None
    minimal_polynomial: Optional[Polynomial] = None
    spectral: Optional[SpectralData] = None
    pairing: Optional[PairingResult] = None
    witness: Optional[SymmetryWitness] = None
    relation: Optional[ReverserRelation] = None
    classification: Optional[ClassificationReport] = None
    sl4: Optional[SL4Decision] = None
    polynomial_criterion: Optional[bool] = None
    warnings: List[str] = field(default_factory=list)
    error: Optional[Dict[str, str]] = None
    exit_code: int = 0

    @property
    def success(self) -> bool:
        return self.error is None

    @property
    def reversible(self) -> Optional[bool]:
        return self.pairing.verdict if self.pairing else None

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def to_dict(self) -> Dict[str, Any]:
        def optional(value: Any) -> Any:
            return value.to_dict() if value is not None else None

        return {
            "request": self.request,
            "tolerances": self.tolerances,
            "characteristic_polynomial": (
                self.characteristic_polynomial.to_json() if self.characteristic_polynomial else None
            ),
            "minimal_polynomial": self.minimal_polynomial.to_json() if self.minimal_polynomial else None,
            "spectral": optional(self.spectral),
            "pairing": optional(self.pairing),
            "pairing_verdict": self.reversible,
            "witness": optional(self.witness),
            "relation": self.relation.value if self.relation else None,
            "classification": optional(self.classification),
            "sl4_path": list(self.sl4.path) if self.sl4 else None,
            "sl4": optional(self.sl4),
            "polynomial_criterion": self.polynomial_criterion,
            "warnings": list(self.warnings),
            "error": self.error,
            "exit_code": self.exit_code,
        }


def resolve_tolerances(
    preset: str = "default",
    overrides: Optional[Mapping[str, float]] = None,
    custom_presets: Optional[Mapping[str, ToleranceConfig]] = None,
) -> ToleranceConfig:
    """Preset (custom first, then built-in) with overrides applied.

    The default preset honours the CREV_DEFAULT_TOL scale.
    """
    if custom_presets and preset in custom_presets:
        base = custom_presets[preset]
    elif preset == "default":
        base = ToleranceConfig.from_env()
    else:
        base = get_preset(preset)
    return base.with_overrides(overrides)


def _fail(report: AnalysisReport, stage: str, error: ReversibilityError) -> AnalysisReport:
    logger.info("analysis failed in stage %s: %s", stage, error)
    report.error = {"stage": stage, "type": type(error).__name__, "message": str(error)}
    report.exit_code = error.exit_code
    return report


def run_analyze(
    request: AnalysisRequest, custom_presets: Optional[Mapping[str, ToleranceConfig]] = None
) -> AnalysisReport:
    """Run the pipeline; module errors land in ``report.error`` with their stage name."""
    tols = resolve_tolerances(request.preset, request.tolerance_overrides, custom_presets)
    report = AnalysisReport(request=request.echo(), tolerances=tols.to_dict())
    outputs = request.outputs

    stage = "input"
    try:
        A = as_complex_matrix(request.matrix)
        n = A.shape[0]
        if request.sl_check:
            require_special_linear(A, tols.det_tol)

        stage = "char-poly"
        report.characteristic_polynomial = char_poly(A)

        stage = "spectral"
        S = eigen_structure(A, tols)
        report.spectral = S
        report.minimal_polynomial = minimal_polynomial(S)

        stage = "pairing"
        pairing = pairing_check(S, tols.unit_tol, tols.match_tol)
        report.pairing = pairing

        stage = "witness"
        if Output.WITNESS in outputs and pairing.verdict:
            report.witness = assemble_reverser(A, S, pairing, tols)
            if report.witness.basis_condition > ILL_CONDITIONED_BASIS:
                report.warn(
                    f"ill-conditioned Jordan basis (condition {report.witness.basis_condition:.3e})"
                )

        stage = "classification"
        if Output.CLASSIFY in outputs:
            report.classification = classify(A, tols, S, pairing)
            report.sl4 = report.classification.sl4
            for message in report.classification.warnings:
                report.warn(message)

        stage = "sl4"
        # classify() already decides SL(4) elements
        if Output.SL4 in outputs and Output.CLASSIFY not in outputs:
            if n != 4:
                report.warn(f"sl4 decision needs n = 4, got n = {n}")
            elif report.sl4 is None:
                report.sl4 = sl4_classify(A, tols, S, pairing)

        stage = "polynomial-criterion"
        if Output.POLYNOMIAL_CRITERION in outputs or Output.CLASSIFY in outputs:
            report.polynomial_criterion = polynomial_criterion(A, S, tols.coeff_tol)
            if report.polynomial_criterion and not pairing.verdict:
                report.warn(TENSION_WARNING)
    except ReversibilityError as e:
        return _fail(report, stage, e)

    if report.sl4 is not None and not report.sl4.consistent:
        report.warn(
            f"sl4 verdict {report.sl4.verdict} disagrees with pairing verdict {report.sl4.pairing_verdict}"
        )
        report.exit_code = 5
    return report


def run_verify(
    A: ComplexMatrix,
    h: ComplexMatrix,
    tols: Optional[ToleranceConfig] = None,
    source: Optional[str] = None,
) -> AnalysisReport:
    """Judge a user-supplied reverser h of A.

    The acceptance threshold is witness_tol * (1 + cond(h)).
    """
    tols = tols or ToleranceConfig()
    report = AnalysisReport(
        request={"source": source, "n": int(np.asarray(A).shape[0]), "outputs": ["witness"]},
        tolerances=tols.to_dict(),
    )
    try:
        measured = verify_reverser(A, h)
        condition = float(np.linalg.cond(as_complex_matrix(h)))
        threshold = tols.witness_tol * (1.0 + condition)
        report.witness = SymmetryWitness(
            h=measured.h,
            residual_conjugation=measured.residual_conjugation,
            residual_involution=measured.residual_involution,
            residual_det=measured.residual_det,
            basis_condition=condition,
            tolerance=threshold,
            accepted=measured.max_residual <= threshold,
        )
        report.relation = reverser_relation(A, h, tols.witness_tol)
    except ReversibilityError as e:
        return _fail(report, "verify", e)
    return report


class ReversibilityAnalyzer:
    """Analyze SL(n, C) elements with named tolerance presets."""

    def __init__(self, preset: str = "default"):
        """Initialize the analyzer.

        Args:
            preset: Default tolerance preset for analyze()
        """
        self.preset = preset
        self.custom_presets: Dict[str, ToleranceConfig] = {}

    def add_preset(self, name: str, config: ToleranceConfig) -> None:
        """Add a custom tolerance preset (shadows a built-in of the same name)."""
        self.custom_presets[name] = config

    def get_preset(self, name: str) -> ToleranceConfig:
        """Get preset by name (checks custom presets first, then built-in).

        Raises:
            InvalidPresetError: If preset doesn't exist
        """
        if name in self.custom_presets:
            return self.custom_presets[name]
        return get_preset(name)

    def presets(self) -> List[str]:
        return sorted(set(PRESETS) | set(self.custom_presets))

    def analyze(
        self,
        matrix: Any,
        outputs: Iterable[Union[str, Output]] = ALL_OUTPUTS,
        preset: Optional[str] = None,
        sl_check: bool = True,
        source: Optional[str] = None,
        **tolerance_overrides: float,
    ) -> AnalysisReport:
        """Analyze one matrix.

        Args:
            matrix: Square complex array-like
            outputs: Parts of the pipeline to report
            preset: Tolerance preset; the analyzer default when None
            sl_check: Require det = 1 within det_tol
            source: Label echoed in the report
            **tolerance_overrides: Named tolerances, e.g. unit_tol=1e-6

        Raises:
            InvalidToleranceError: If an override name is unknown
        """
        request = AnalysisRequest(
            matrix=np.asarray(matrix, dtype=np.complex128),
            tolerance_overrides=tolerance_overrides,
            outputs=frozenset(outputs),
            preset=preset or self.preset,
            sl_check=sl_check,
            source=source,
        )
        return run_analyze(request, self.custom_presets)

    def analyze_file(
        self,
        path: str,
        fmt: Optional[str] = None,
        outputs: Iterable[Union[str, Output]] = ALL_OUTPUTS,
        preset: Optional[str] = None,
        sl_check: bool = True,
        tolerance_overrides: Optional[Mapping[str, float]] = None,
    ) -> AnalysisReport:
        """Load and analyze a matrix file; parse failures are reported, not raised.

        Raises:
            InvalidToleranceError: If an override name is unknown
        """
        overrides = dict(tolerance_overrides or {})
        preset = preset or self.preset
        tols = resolve_tolerances(preset, overrides, self.custom_presets)
        source = os.path.basename(path)
        try:
            A = load_matrix(path, fmt, tols.det_tol, sl_check=False)
        except ReversibilityError as e:
            requested = sorted(o.value for o in parse_outputs(outputs))
            request = {"source": source, "n": None, "preset": preset, "outputs": requested}
            report = AnalysisReport(request=request, tolerances=tols.to_dict())
            return _fail(report, "parse", e)
        return self.analyze(A, outputs, preset, sl_check, source, **overrides)


def _scientific(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3e}"


def _yes_no(value: Optional[bool]) -> str:
    return "n/a" if value is None else ("yes" if value else "no")


def render_text(report: AnalysisReport) -> str:
    """Human-readable summary of a report."""
    lines = []
    req = report.request
    label = f" ({req['source']})" if req.get("source") else ""
    size = f"{req['n']}x{req['n']}" if req.get("n") else "unread"
    lines.append(f"matrix: {size}{label}")

    if report.pairing is not None:
        if report.pairing.verdict:
            lines.append("c-reversible: yes (strong)")
        else:
            lines.append(f"c-reversible: no ({report.pairing.obstruction})")
    if report.spectral is not None:
        for c in report.spectral.clusters:
            blocks = ",".join(str(b) for b in c.block_sizes)
            lines.append(f"eigenvalue: {format_complex(c.eigenvalue)} blocks {{{blocks}}}")

    cls = report.classification
    if cls is not None:
        lines.append(f"type: {cls.dynamical_type.value}")
        lines.append(
            f"loxodromy: r={cls.profile.r} s={cls.profile.s} regular={_yes_no(cls.profile.regular)}"
        )
        resultant_class = cls.resultant_class.value if cls.resultant_class else "n/a"
        lines.append(
            f"resultant: {format_complex(cls.resultant_value)} sign {cls.resultant_sign.value}, "
            f"class {resultant_class}"
        )
        lines.append(f"trace bounded: {_yes_no(cls.trace_bounded)}")
    if report.polynomial_criterion is not None:
        lines.append(f"polynomial criterion: {'pass' if report.polynomial_criterion else 'fail'}")

    w = report.witness
    if w is not None:
        status = "accepted" if w.accepted else "rejected"
        lines.append(
            f"witness: {status}, residuals conjugation={_scientific(w.residual_conjugation)} "
            f"involution={_scientific(w.residual_involution)} det={_scientific(w.residual_det)} "
            f"(threshold {_scientific(w.tolerance)}, condition {_scientific(w.basis_condition)})"
        )
    if report.relation is not None:
        lines.append(f"relation: {report.relation.value}")
    if report.sl4 is not None:
        lines.append(f"sl4: {'c-reversible' if report.sl4.verdict else 'not c-reversible'}")
        lines.append(f"sl4 path: {' > '.join(report.sl4.path)}")

    lines.append(
        "tolerances: " + " ".join(f"{k}={v:g}" for k, v in report.tolerances.items())
    )
    for message in report.warnings:
        lines.append(f"warning: {message}")
    if report.error is not None:
        lines.append(f"error: [{report.error['stage']}] {report.error['type']}: {report.error['message']}")
    return "\n".join(lines) + "\n"


def dumps_json(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def emit_report(report: AnalysisReport, mode: str = "json") -> bytes:
    """Serialize a report as canonical JSON or as a text summary."""
    if mode == "json":
        return dumps_json(report.to_dict()).encode("utf-8")
    if mode == "text":
        return render_text(report).encode("utf-8")
    raise InvalidInputError(f"Unknown output mode '{mode}'. Available: json, text")
