"""
Built-in self-tests: exact identities and known matrix families checked end to end.
"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .classification import TENSION_WARNING, ResultantClass, classify, resultant_classify, sl4_classify
from .exceptions import ReversibilityError
from .families import (
    a1,
    a2,
    a3_pm1,
    a3_pmi,
    conjugate,
    pairable_jordan_blocks,
    regular_c_reciprocal_spectrum,
    tension_matrix,
)
from .numerics import BinomialIdentity, binomial_identity_check, frobenius
from .progress import ProgressCallback, ProgressTracker
from .reversibility import build_unit_symmetry, find_reverser
from .spectral import jordan_matrix
from .tolerances import ToleranceConfig

logger = logging.getLogger(__name__)

EXIT_FAILED = 5


@dataclass(frozen=True)
class SelfTestResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": self.seconds}


Check = Callable[[np.random.Generator, ToleranceConfig], Tuple[bool, str]]


def check_binomial_identities(rng: np.random.Generator, tols: ToleranceConfig) -> Tuple[bool, str]:
    checked = 0
    for n in range(1, 65):
        for r in range(n):
            kinds = [BinomialIdentity.WEIGHTED_ALTERNATING]
            if n > 1:
                kinds.append(BinomialIdentity.ALTERNATING_TAIL)
            for kind in kinds:
                value = binomial_identity_check(kind, n, r)
                if value != 0:
                    return False, f"{kind.value} n={n} r={r} gives {value}"
                checked += 1
    return True, f"{checked} identities vanish"


def check_unit_symmetry_example(rng: np.random.Generator, tols: ToleranceConfig) -> Tuple[bool, str]:
    worst_entry = worst_involution = 0.0
    for _ in range(20):
        lam, b = np.exp(1j * rng.uniform(0, 2 * np.pi, size=2))
        B = build_unit_symmetry(lam, 4, b)
        expected = np.zeros((4, 4), dtype=np.complex128)
        expected[0, 0] = b
        expected[1, 1:] = [-b / lam ** 2, b / lam ** 3, -b / lam ** 4]
        expected[2, 2:] = [b / lam ** 4, -2 * b / lam ** 5]
        expected[3, 3] = -b / lam ** 6
        worst_entry = max(worst_entry, float(np.max(np.abs(B - expected))))
        worst_involution = max(worst_involution, frobenius(B @ np.conj(B) - np.eye(4)))
    passed = worst_entry <= 1e-14 and worst_involution <= 1e-12
    return passed, f"entry error {worst_entry:.1e}, involution residual {worst_involution:.1e}"


_SL4_HAND_CASES = (
    ("J(2,2)+diag(1/2,1/2)", lambda rng: a1(rng, r=2.0), False, "real-trace"),
    ("J(2i,2)+diag(i/2,i/2)", lambda rng: a2(rng, r=2.0), False, "imaginary-trace"),
    ("diag(1,1,2,1/2)", lambda rng: a3_pm1(rng, sign=1.0, r=2.0), True, "real-trace"),
    ("diag(i,i,2i,i/2)", lambda rng: a3_pmi(rng, sign=1.0, r=2.0), True, "imaginary-trace"),
)


def check_sl4_hand_values(rng: np.random.Generator, tols: ToleranceConfig) -> Tuple[bool, str]:
    for label, build, verdict, branch in _SL4_HAND_CASES:
        decision = sl4_classify(build(rng), tols)
        if decision.verdict != verdict or decision.branch != branch or not decision.consistent:
            return False, f"{label}: got {decision.verdict}/{decision.branch}, want {verdict}/{branch}"
    return True, f"{len(_SL4_HAND_CASES)} matrices on their branches"


def check_resultant_parity(rng: np.random.Generator, tols: ToleranceConfig) -> Tuple[bool, str]:
    count = 0
    for r, s in ((0, 3), (1, 1), (1, 2), (2, 0), (2, 1), (1, 3)):
        A = conjugate(np.diag(regular_c_reciprocal_spectrum(r, s, rng)), rng, cond=3.0)
        got = resultant_classify(
            A, tols.res_tol, tols.coeff_tol, cluster_tol=tols.cluster_tol, root_noise=tols.root_noise
        )
        want = ResultantClass.REGULAR_EVEN_LOXODROMIC if r % 2 == 0 else ResultantClass.REGULAR_ODD_LOXODROMIC
        if got is not want:
            return False, f"r={r} s={s}: got {got.value}, want {want.value}"
        count += 1
    return True, f"{count} regular spectra with the expected parity"


def check_reverser_assembly(rng: np.random.Generator, tols: ToleranceConfig) -> Tuple[bool, str]:
    worst = 0.0
    for _ in range(5):
        A = conjugate(jordan_matrix(pairable_jordan_blocks(rng, max_dim=6)), rng, cond=3.0)
        witness = find_reverser(A, tols)
        if not witness.accepted:
            return False, f"witness rejected, max residual {witness.max_residual:.1e}"
        worst = max(worst, witness.max_residual)
    return True, f"5 reversers accepted, max residual {worst:.1e}"


def check_tension_reported(rng: np.random.Generator, tols: ToleranceConfig) -> Tuple[bool, str]:
    report = classify(tension_matrix(2.0), tols)
    if report.pairing_verdict or not report.polynomial_criterion:
        return False, "expected polynomial criterion pass with pairing fail"
    if TENSION_WARNING not in report.warnings:
        return False, "disagreement warning missing"
    return True, "criterion/pairing disagreement reported"


CHECKS: Tuple[Tuple[str, Check], ...] = (
    ("binomial-identities", check_binomial_identities),
    ("unit-symmetry-example", check_unit_symmetry_example),
    ("sl4-hand-values", check_sl4_hand_values),
    ("resultant-parity", check_resultant_parity),
    ("reverser-assembly", check_reverser_assembly),
    ("tension", check_tension_reported),
)


def run_selftest(
    seed: int = 0,
    tols: Optional[ToleranceConfig] = None,
    progress_callback: Optional[ProgressCallback] = None,
) -> List[SelfTestResult]:
    """Run every check with a seeded generator; errors count as failures."""
    tols = tols or ToleranceConfig()
    rng = np.random.default_rng(seed)
    tracker = ProgressTracker(len(CHECKS), progress_callback)
    results = []
    for name, check in CHECKS:
        start = time.perf_counter()
        try:
            passed, detail = check(rng, tols)
        except ReversibilityError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        result = SelfTestResult(name, passed, detail, time.perf_counter() - start)
        if passed:
            logger.info("selftest %s passed: %s", name, detail)
        else:
            logger.error("selftest %s failed: %s", name, detail)
        results.append(result)
        tracker.update(name, 0 if passed else EXIT_FAILED)
    return results


def selftest_exit_code(results: List[SelfTestResult]) -> int:
    return 0 if all(r.passed for r in results) else EXIT_FAILED
