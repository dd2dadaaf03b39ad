"""
c-reversibility: Jordan-block pairing, explicit involutory c-symmetries and
global reverser assembly.

An element A is c-reversible when h A h^-1 = conj(A)^-1 for some h, and
strongly so when additionally h conj(h) = I. The verdict comes from pairing
Jordan blocks J(lambda, m) with J(conj(lambda)^-1, m); unit-modulus blocks
pair with themselves. Each pairing is realised by an explicit block matrix
and transported to A through a Jordan basis.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    AmbiguousPairingError,
    AssemblyFailureError,
    InvalidInputError,
    NotReversibleError,
)
from .numerics import ComplexMatrix, as_complex_matrix, frobenius, matrix_pairs
from .spectral import SpectralData, eigen_structure, jordan_basis
from .tolerances import ToleranceConfig

logger = logging.getLogger(__name__)

_DEFAULTS = ToleranceConfig()


@dataclass(frozen=True)
class ClusterPair:
    """Two clusters lambda, conj(lambda)^-1 with identical block sizes."""

    index: int
    partner: int
    block_sizes: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "partner": self.partner, "blocks": list(self.block_sizes)}


@dataclass(frozen=True)
class PairingResult:
    """Outcome of the Jordan-block pairing test.

    Attributes:
        verdict: True iff every non-unit cluster has a partner with equal block sizes
        pairs: Matched cluster pairs (indices into SpectralData.clusters)
        singletons: Indices of unit-modulus clusters
        obstruction: Description of the first unpairable cluster
    """

    verdict: bool
    pairs: Tuple[ClusterPair, ...] = ()
    singletons: Tuple[int, ...] = ()
    obstruction: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "pairs": [p.to_dict() for p in self.pairs],
            "singletons": list(self.singletons),
            "obstruction": self.obstruction,
        }


@dataclass(frozen=True)
class SymmetryWitness:
    """Candidate reverser h with its measured residuals.

    Attributes:
        h: The reverser
        residual_conjugation: ||h A h^-1 - conj(A)^-1||_F
        residual_involution: ||h conj(h) - I||_F
        residual_det: |det h - 1|
        basis_condition: Condition number of the Jordan basis used, 1 when none
        tolerance: Acceptance threshold applied, None if never judged
        accepted: Whether all residuals met the threshold, None if never judged
    """

    h: np.ndarray = field(compare=False, repr=False)
    residual_conjugation: float
    residual_involution: float
    residual_det: float
    basis_condition: float = 1.0
    tolerance: Optional[float] = None
    accepted: Optional[bool] = None

    @property
    def residuals(self) -> Dict[str, float]:
        return {
            "conjugation": self.residual_conjugation,
            "involution": self.residual_involution,
            "det": self.residual_det,
        }

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": matrix_pairs(self.h),
            "residual_conjugation": self.residual_conjugation,
            "residual_involution": self.residual_involution,
            "residual_det": self.residual_det,
            "basis_condition": self.basis_condition,
            "tolerance": self.tolerance,
            "accepted": self.accepted,
        }


class PhaseMode(str, Enum):
    UNIT_BLOCK = "unit-block"
    PAIR_BLOCK = "pair-block"


class ReverserRelation(str, Enum):
    """How a matrix h acts on g by conjugation."""

    CENTRALIZES = "centralizes"
    REVERSES = "reverses"
    NEITHER = "neither"


def _multiset(sizes: Sequence[int]) -> str:
    return "{" + ",".join(str(s) for s in sizes) + "}"


def pairing_check(
    S: SpectralData, unit_tol: Optional[float] = None, match_tol: Optional[float] = None
) -> PairingResult:
    """Pair clusters lambda with conj(lambda)^-1 and compare their block sizes.

    Raises:
        AmbiguousPairingError: If two clusters both qualify as a partner
    """
    unit_tol = _DEFAULTS.unit_tol if unit_tol is None else unit_tol
    match_tol = _DEFAULTS.match_tol if match_tol is None else match_tol

    clusters = S.clusters
    singletons = [i for i, c in enumerate(clusters) if abs(abs(c.eigenvalue) - 1) <= unit_tol]
    remaining = [i for i in range(len(clusters)) if i not in singletons]

    used = set()
    pairs: List[ClusterPair] = []
    obstruction: Optional[str] = None
    for i in remaining:
        if i in used:
            continue
        target = 1.0 / np.conj(clusters[i].eigenvalue)
        radius = match_tol * max(1.0, abs(target))
        candidates = [
            j
            for j in remaining
            if j != i and j not in used and abs(clusters[j].eigenvalue - target) <= radius
        ]
        if len(candidates) > 1:
            raise AmbiguousPairingError(
                f"{len(candidates)} clusters lie within match_tol={match_tol:.1e} of "
                f"conj({clusters[i].eigenvalue:.6g})^-1; tighten cluster_tol or match_tol"
            )
        if not candidates:
            logger.debug("cluster %d (%s) has no partner", i, clusters[i].eigenvalue)
            if obstruction is None:
                obstruction = f"unmatched eigenvalue {clusters[i].eigenvalue:.6g}"
            used.add(i)
            continue

        j = candidates[0]
        used.update((i, j))
        sizes_i = clusters[i].block_sizes
        sizes_j = clusters[j].block_sizes
        if sizes_i != sizes_j:
            logger.debug("clusters %d and %d differ in block sizes %s vs %s", i, j, sizes_i, sizes_j)
            if obstruction is None:
                obstruction = f"block-size multiset mismatch {_multiset(sizes_i)} vs {_multiset(sizes_j)}"
            continue
        pairs.append(ClusterPair(i, j, sizes_i))

    return PairingResult(
        verdict=obstruction is None,
        pairs=tuple(pairs),
        singletons=tuple(singletons),
        obstruction=obstruction,
    )


def b_determinant_sign(n: int) -> int:
    """Sign in det B = sign * b^n / lambda^(n(n-1)): +1 iff n mod 4 is 0 or 1."""
    return 1 if n % 4 in (0, 1) else -1


def _signed_pascal(n: int) -> np.ndarray:
    """Integer T with T_11 = 1 and T_ij = (-1)^(j+1) C(j-2, i-2) for 2 <= i <= j; T @ T = I."""
    T = np.zeros((n, n))
    T[0, 0] = 1.0
    for i in range(2, n + 1):
        for j in range(i, n + 1):
            T[i - 1, j - 1] = (-1) ** (j + 1) * math.comb(j - 2, i - 2)
    return T


def _symmetry_entries(n: int, b: complex, base: complex) -> ComplexMatrix:
    """B = b D T D with D = diag(base^k): b_ij = (-1)^(j+1) C(j-2, i-2) b base^(i+j-2), upper triangular."""
    powers = base ** np.arange(n)
    return b * powers[:, None] * _signed_pascal(n) * powers[None, :]


def build_unit_symmetry(
    lam: complex, n: int, b: complex, unit_tol: Optional[float] = None
) -> ComplexMatrix:
    """Involutory c-symmetry B of J(lam, n) for |lam| = 1: B J B^-1 = conj(J)^-1.

    Raises:
        InvalidInputError: If |lam| or |b| is off the unit circle, or n < 1
    """
    unit_tol = _DEFAULTS.unit_tol if unit_tol is None else unit_tol
    if n < 1:
        raise InvalidInputError(f"block size must be >= 1, got {n}")
    if abs(abs(lam) - 1) > unit_tol:
        raise InvalidInputError(f"unit-block symmetry needs |lambda| = 1, got |lambda| = {abs(lam):.12g}")
    if abs(abs(b) - 1) > unit_tol:
        raise InvalidInputError(f"phase b must have |b| = 1, got |b| = {abs(b):.12g}")
    return _symmetry_entries(n, complex(b), 1.0 / complex(lam))


def build_pair_symmetry(
    lam: complex, n: int, b: complex, unit_tol: Optional[float] = None
) -> ComplexMatrix:
    """2n x 2n involutory c-symmetry C = [[0, B], [conj(B)^-1, 0]] of J(lam, n) + J(conj(lam)^-1, n).

    Raises:
        InvalidInputError: If |lam| is within unit_tol of 1, lam is zero, or n < 1
    """
    unit_tol = _DEFAULTS.unit_tol if unit_tol is None else unit_tol
    if n < 1:
        raise InvalidInputError(f"block size must be >= 1, got {n}")
    if lam == 0:
        raise InvalidInputError("pair-block symmetry needs lambda != 0")
    if abs(abs(lam) - 1) <= unit_tol:
        raise InvalidInputError(
            f"|lambda| = {abs(lam):.12g} is unit modulus; use build_unit_symmetry"
        )
    B = _symmetry_entries(n, complex(b), np.conj(complex(lam)))
    C = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    C[:n, n:] = B
    # conj(B)^-1 = conj(b)^-1 D^-1 T D^-1 with D = diag(lam^k) and T @ T = I
    C[n:, :n] = _symmetry_entries(n, 1.0 / np.conj(complex(b)), 1.0 / complex(lam))
    return C


def _principal_phase(angle: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    return float(np.angle(np.exp(1j * angle)))


def choose_phase(mode: Union[PhaseMode, str], lam: complex, n: int) -> complex:
    """Unit-modulus b making det B = 1 (unit block) or det C = 1 (pair block).

    Unit block: the principal n-th root of sign * lam^(n(n-1)).
    Pair block: b with b^n conj(lam)^(n(n-1)) real positive (n even) or on the
    positive imaginary axis (n odd).
    """
    mode = PhaseMode(mode)
    if lam == 0:
        raise InvalidInputError("choose_phase needs lambda != 0")
    if n < 1:
        raise InvalidInputError(f"block size must be >= 1, got {n}")
    theta = float(np.angle(lam))
    exponent = n * (n - 1)

    if mode is PhaseMode.UNIT_BLOCK:
        offset = 0.0 if b_determinant_sign(n) > 0 else math.pi
        return complex(np.exp(1j * _principal_phase(exponent * theta + offset) / n))

    target = 0.0 if n % 2 == 0 else math.pi / 2
    return complex(np.exp(1j * _principal_phase(target + exponent * theta) / n))


def _block_layout(S: SpectralData) -> List[List[Tuple[int, int]]]:
    """(start column, size) of every block, grouped by cluster."""
    layout = []
    start = 0
    for cluster in S.clusters:
        spans = []
        for size in cluster.block_sizes:
            spans.append((start, size))
            start += size
        layout.append(spans)
    return layout


def _block_diagonal(blocks: Sequence[np.ndarray]) -> ComplexMatrix:
    n = sum(b.shape[0] for b in blocks)
    H = np.zeros((n, n), dtype=np.complex128)
    offset = 0
    for block in blocks:
        size = block.shape[0]
        H[offset : offset + size, offset : offset + size] = block
        offset += size
    return H


def assemble_reverser(
    A: ComplexMatrix,
    S: SpectralData,
    pairing: PairingResult,
    tols: Optional[ToleranceConfig] = None,
) -> SymmetryWitness:
    """Global strong reverser h = conj(P') H P'^-1 from block-level symmetries.

    P' is the Jordan basis with each pair's blocks made adjacent; H is the
    block-diagonal matrix of unit-block and pair-block symmetries.

    Raises:
        NotReversibleError: If the pairing verdict is false
        AssemblyFailureError: If the measured residuals exceed the acceptance threshold
    """
    tols = tols or ToleranceConfig()
    A = as_complex_matrix(A)
    if not pairing.verdict:
        raise NotReversibleError(f"element is not c-reversible: {pairing.obstruction}")
    if S.jordan_basis is None:
        S = S.with_basis(jordan_basis(A, S, tols))

    layout = _block_layout(S)
    partner_of = {p.index: p for p in pairing.pairs}
    singletons = set(pairing.singletons)

    order: List[int] = []
    blocks: List[np.ndarray] = []
    for i, cluster in enumerate(S.clusters):
        if i in singletons:
            mu = cluster.eigenvalue / abs(cluster.eigenvalue)
            for start, size in layout[i]:
                order.extend(range(start, start + size))
                b = choose_phase(PhaseMode.UNIT_BLOCK, mu, size)
                blocks.append(build_unit_symmetry(mu, size, b, tols.unit_tol))
        elif i in partner_of:
            pair = partner_of[i]
            partner = S.clusters[pair.partner].eigenvalue
            lam = (cluster.eigenvalue + 1.0 / np.conj(partner)) / 2
            for (start, size), (p_start, _) in zip(layout[i], layout[pair.partner]):
                order.extend(range(start, start + size))
                order.extend(range(p_start, p_start + size))
                b = choose_phase(PhaseMode.PAIR_BLOCK, lam, size)
                blocks.append(build_pair_symmetry(lam, size, b, tols.unit_tol))

    n = A.shape[0]
    if sorted(order) != list(range(n)):
        raise NotReversibleError("pairing does not cover every Jordan block")

    P = S.jordan_basis[:, order]
    H = _block_diagonal(blocks)
    h = np.conj(P) @ H @ np.linalg.inv(P)

    condition = float(S.basis_condition or np.linalg.cond(P))
    threshold = tols.witness_tol * (1.0 + condition ** 2)
    witness = verify_reverser(A, h)
    logger.debug(
        "assembled reverser residuals %s (threshold %.3e, condition %.3e)",
        witness.residuals,
        threshold,
        condition,
    )
    if not witness.max_residual <= threshold:
        raise AssemblyFailureError(witness.residuals, condition, threshold)

    return SymmetryWitness(
        h=h,
        residual_conjugation=witness.residual_conjugation,
        residual_involution=witness.residual_involution,
        residual_det=witness.residual_det,
        basis_condition=condition,
        tolerance=threshold,
        accepted=True,
    )


def _require_nonsingular(M: np.ndarray, name: str) -> None:
    if not np.linalg.cond(M) < 1.0 / np.finfo(float).eps:
        raise InvalidInputError(f"{name} is singular")


def verify_reverser(A: ComplexMatrix, h: ComplexMatrix) -> SymmetryWitness:
    """Measure how well h reverses A; acceptance is left to the caller.

    Raises:
        InvalidInputError: If dimensions differ or h is singular
    """
    A = as_complex_matrix(A, "A")
    h = as_complex_matrix(h, "h")
    if A.shape != h.shape:
        raise InvalidInputError(f"dimension mismatch: A is {A.shape}, h is {h.shape}")
    _require_nonsingular(h, "h")

    n = A.shape[0]
    target = np.linalg.inv(np.conj(A))
    conjugated = h @ A @ np.linalg.inv(h)
    return SymmetryWitness(
        h=h.copy(),
        residual_conjugation=frobenius(conjugated - target),
        residual_involution=frobenius(h @ np.conj(h) - np.eye(n)),
        residual_det=abs(complex(np.linalg.det(h)) - 1),
    )


def factor_involutory(A: ComplexMatrix, w: SymmetryWitness) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """Write A as a product of two involutory c-symmetries, (h^-1, conj(A)^-1 h).

    Raises:
        InvalidInputError: If the witness was rejected
    """
    if w.accepted is False:
        raise InvalidInputError("cannot factor with a rejected witness")
    A = as_complex_matrix(A)
    first = np.linalg.inv(w.h)
    second = np.linalg.inv(np.conj(A)) @ w.h
    return first, second


def reverser_relation(
    g: ComplexMatrix, h: ComplexMatrix, tol: Optional[float] = None
) -> ReverserRelation:
    """Whether h commutes with g, reverses it, or neither; commuting wins when both hold."""
    tol = _DEFAULTS.witness_tol if tol is None else tol
    g = as_complex_matrix(g, "g")
    h = as_complex_matrix(h, "h")
    if g.shape != h.shape:
        raise InvalidInputError(f"dimension mismatch: g is {g.shape}, h is {h.shape}")
    _require_nonsingular(g, "g")
    _require_nonsingular(h, "h")

    conjugated = h @ g @ np.linalg.inv(h)
    scale = tol * frobenius(g)
    if frobenius(conjugated - g) <= scale:
        return ReverserRelation.CENTRALIZES
    if frobenius(conjugated - np.linalg.inv(np.conj(g))) <= scale:
        return ReverserRelation.REVERSES
    return ReverserRelation.NEITHER


def transport_reverser(h: ComplexMatrix, k: ComplexMatrix) -> ComplexMatrix:
    """Reverser of k g k^-1 from a reverser h of g: conj(k) h k^-1."""
    h = as_complex_matrix(h, "h")
    k = as_complex_matrix(k, "k")
    _require_nonsingular(k, "k")
    return np.conj(k) @ h @ np.linalg.inv(k)


def find_reverser(A: ComplexMatrix, tols: Optional[ToleranceConfig] = None) -> SymmetryWitness:
    """Full pipeline: spectral data with basis, pairing, assembly.

    Raises:
        NotReversibleError: If A is not c-reversible
    """
    tols = tols or ToleranceConfig()
    S = eigen_structure(A, tols, with_basis=True)
    pairing = pairing_check(S, tols.unit_tol, tols.match_tol)
    return assemble_reverser(A, S, pairing, tols)
