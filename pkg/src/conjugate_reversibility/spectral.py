"""
Eigenstructure recovery: clustered spectrum, Jordan block sizes per eigenvalue,
minimal polynomial and a Jordan basis.

Block sizes come from rank evidence only. For each eigenvalue cluster the
kernel dimensions w_k = dim ker (A - lambda I)^k (the Weyr sequence) are read
off singular values and converted to block sizes by conjugate partition.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import IllConditionedJordanError, InvalidInputError, SpectralAmbiguityError
from .numerics import (
    ComplexMatrix,
    Polynomial,
    as_complex_matrix,
    char_poly,
    complex_pair,
    frobenius,
    matrix_from_pairs,
    matrix_pairs,
    null_space_basis,
    numeric_rank,
    orthonormal_basis,
    poly_roots,
    require_invertible,
    split_cluster,
)
from .tolerances import ToleranceConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JordanBlockSpec:
    """Jordan block J(eigenvalue, size)."""

    eigenvalue: complex
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InvalidInputError(f"Jordan block size must be >= 1, got {self.size}")


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue with its Segre characteristic (block sizes, descending)."""

    eigenvalue: complex
    block_sizes: Tuple[int, ...]
    radius: float = 0.0

    @property
    def multiplicity(self) -> int:
        return sum(self.block_sizes)

    @property
    def largest_block(self) -> int:
        return max(self.block_sizes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalue": complex_pair(self.eigenvalue),
            "blocks": list(self.block_sizes),
            "radius": self.radius,
        }


@dataclass(frozen=True)
class SpectralData:
    """Clustered spectrum and Jordan data of one matrix.

    Attributes:
        clusters: Eigenvalue clusters in canonical order
        jordan_basis: Optional P with A = P J P^-1 and det P = 1
        basis_condition: 2-norm condition number of P, when present
    """

    clusters: Tuple[EigenCluster, ...]
    jordan_basis: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    basis_condition: Optional[float] = None

    @property
    def dimension(self) -> int:
        return sum(c.multiplicity for c in self.clusters)

    @property
    def semisimple(self) -> bool:
        return all(size == 1 for c in self.clusters for size in c.block_sizes)

    @property
    def regular(self) -> bool:
        return all(c.multiplicity == 1 for c in self.clusters)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(c.multiplicity for c in self.clusters)

    @property
    def eigenvalues(self) -> Tuple[complex, ...]:
        """Eigenvalues repeated by algebraic multiplicity."""
        return tuple(c.eigenvalue for c in self.clusters for _ in range(c.multiplicity))

    @property
    def determinant(self) -> complex:
        value = complex(1.0)
        for c in self.clusters:
            value *= c.eigenvalue ** c.multiplicity
        return value

    def blocks(self) -> List[JordanBlockSpec]:
        """Jordan blocks in canonical order."""
        return [
            JordanBlockSpec(c.eigenvalue, size) for c in self.clusters for size in c.block_sizes
        ]

    def with_basis(self, P: np.ndarray) -> "SpectralData":
        return replace(self, jordan_basis=P, basis_condition=float(np.linalg.cond(P)))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"clusters": [c.to_dict() for c in self.clusters]}
        if self.jordan_basis is not None:
            data["basis"] = matrix_pairs(self.jordan_basis)
            data["basis_condition"] = self.basis_condition
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SpectralData":
        clusters = tuple(
            EigenCluster(
                eigenvalue=complex(*c["eigenvalue"]),
                block_sizes=tuple(int(b) for b in c["blocks"]),
                radius=float(c.get("radius", 0.0)),
            )
            for c in data["clusters"]
        )
        basis = data.get("basis")
        if basis is None:
            return cls(clusters)
        return cls(clusters, matrix_from_pairs(basis), data.get("basis_condition"))


def canonical_key(eigenvalue: complex) -> Tuple[float, float]:
    """Sort key: modulus descending, then argument ascending."""
    return (-round(abs(eigenvalue), 9), float(np.angle(eigenvalue)))


def jordan_block(eigenvalue: complex, size: int) -> ComplexMatrix:
    """Upper bidiagonal J(eigenvalue, size)."""
    if size < 1:
        raise InvalidInputError(f"Jordan block size must be >= 1, got {size}")
    J = eigenvalue * np.eye(size, dtype=np.complex128)
    J += np.eye(size, k=1, dtype=np.complex128)
    return J


def jordan_matrix(blocks: Sequence[JordanBlockSpec]) -> ComplexMatrix:
    """Block-diagonal direct sum of Jordan blocks, in the given order."""
    n = sum(b.size for b in blocks)
    J = np.zeros((n, n), dtype=np.complex128)
    offset = 0
    for b in blocks:
        J[offset : offset + b.size, offset : offset + b.size] = jordan_block(b.eigenvalue, b.size)
        offset += b.size
    return J


def segre_to_weyr(block_sizes: Sequence[int]) -> List[int]:
    """Kernel dimensions w_1..w_L, L the largest block, for the given block sizes."""
    if not block_sizes or any(s < 1 for s in block_sizes):
        raise InvalidInputError(f"block sizes must be positive, got {list(block_sizes)}")
    largest = max(block_sizes)
    weyr = []
    total = 0
    for k in range(1, largest + 1):
        # blocks of size >= k each add one kernel dimension at step k
        total += sum(1 for s in block_sizes if s >= k)
        weyr.append(total)
    return weyr


def weyr_to_segre(weyr: Sequence[int]) -> Tuple[int, ...]:
    """Block sizes (descending) from kernel dimensions w_1..w_L.

    Raises:
        InvalidInputError: If the increments are not a non-increasing positive sequence
    """
    increments = [w - prev for prev, w in zip([0] + list(weyr[:-1]), weyr)]
    if not increments or any(d <= 0 for d in increments):
        raise InvalidInputError(f"kernel dimensions must strictly increase, got {list(weyr)}")
    if any(a < b for a, b in zip(increments, increments[1:])):
        raise InvalidInputError(f"kernel dimension increments must not grow, got {list(weyr)}")
    sizes = []
    for k, count in enumerate(increments, start=1):
        following = increments[k] if k < len(increments) else 0
        sizes.extend([k] * (count - following))
    return tuple(sorted(sizes, reverse=True))


def _kernel_dimensions(
    A: ComplexMatrix, eigenvalue: complex, multiplicity: int, tols: ToleranceConfig
) -> List[int]:
    n = A.shape[0]
    M = A - eigenvalue * np.eye(n, dtype=np.complex128)
    reference = max(1.0, float(np.linalg.norm(A, 2)))
    power = np.eye(n, dtype=np.complex128)
    weyr: List[int] = []
    for k in range(1, multiplicity + 1):
        power = power @ M
        w = n - numeric_rank(power, tols.rank_tol, reference ** k)
        previous = weyr[-1] if weyr else 0
        if w > multiplicity:
            raise SpectralAmbiguityError(
                f"kernel of (A - lambda I)^{k} has dimension {w}, exceeding multiplicity {multiplicity} "
                f"at eigenvalue {eigenvalue:.6g}",
                eigenvalue,
                multiplicity,
            )
        if w == previous:
            raise SpectralAmbiguityError(
                f"kernel dimensions stagnate at {w} below multiplicity {multiplicity} "
                f"at eigenvalue {eigenvalue:.6g}",
                eigenvalue,
                multiplicity,
            )
        weyr.append(w)
        if w == multiplicity:
            return weyr
    raise SpectralAmbiguityError(
        f"kernel dimensions {weyr} never reach multiplicity {multiplicity} at eigenvalue {eigenvalue:.6g}",
        eigenvalue,
        multiplicity,
    )


def eigen_structure(
    A: ComplexMatrix, tols: Optional[ToleranceConfig] = None, with_basis: bool = False
) -> SpectralData:
    """Clustered spectrum and Segre characteristics of an invertible matrix.

    Args:
        A: Square complex matrix
        tols: Tolerance configuration (library defaults when omitted)
        with_basis: Also compute a Jordan basis

    Raises:
        InvalidInputError: If A is not square or numerically singular
        SolverFailureError: If the characteristic polynomial roots do not converge
        SpectralAmbiguityError: If rank evidence contradicts a cluster multiplicity
        IllConditionedJordanError: If with_basis and the chains fail their residual check
    """
    tols = tols or ToleranceConfig()
    A = as_complex_matrix(A)
    require_invertible(A, tols.det_tol)

    chi = char_poly(A)
    pending = poly_roots(
        chi,
        tols.cluster_tol,
        solver_tol=tols.solver_tol,
        max_iterations=tols.max_iterations,
        root_noise=tols.root_noise,
    )

    clusters = []
    while pending:
        root = pending.pop(0)
        try:
            weyr = _kernel_dimensions(A, root.value, root.multiplicity, tols)
            try:
                sizes = weyr_to_segre(weyr)
            except InvalidInputError as e:
                raise SpectralAmbiguityError(str(e), root.value, root.multiplicity)
        except SpectralAmbiguityError:
            if len(root.members) < 2:
                raise
            # Rank evidence rejects the merged root; retry its two halves
            parts = split_cluster(root, chi.coeffs, tols.cluster_tol)
            logger.debug(
                "splitting cluster at %s (multiplicity %d) into %s",
                root.value,
                root.multiplicity,
                [(p.value, p.multiplicity) for p in parts],
            )
            pending = parts + pending
            continue
        logger.debug("eigenvalue %s: kernel dimensions %s, blocks %s", root.value, weyr, sizes)
        clusters.append(EigenCluster(root.value, sizes, root.radius))

    clusters.sort(key=lambda c: canonical_key(c.eigenvalue))
    data = SpectralData(tuple(clusters))

    det = complex(np.linalg.det(A))
    if abs(data.determinant - det) > tols.det_tol * max(1.0, abs(det)):
        logger.warning(
            "eigenvalue product %s differs from det A = %s beyond det_tol", data.determinant, det
        )

    if with_basis:
        data = data.with_basis(jordan_basis(A, data, tols))
    return data


def minimal_polynomial(S: SpectralData) -> Polynomial:
    """prod over clusters of (x - lambda)^(largest block)."""
    roots = [c.eigenvalue for c in S.clusters for _ in range(c.largest_block)]
    return Polynomial.from_roots(roots)


def _cluster_chains(A: ComplexMatrix, cluster: EigenCluster) -> List[np.ndarray]:
    """Jordan chains for one eigenvalue, longest first; each chain is an n x k column block."""
    n = A.shape[0]
    M = A - cluster.eigenvalue * np.eye(n, dtype=np.complex128)
    sizes = cluster.block_sizes
    weyr = segre_to_weyr(sizes)
    longest = max(sizes)

    powers = [np.eye(n, dtype=np.complex128)]
    for _ in range(longest):
        powers.append(powers[-1] @ M)
    kernels = [np.zeros((n, 0), dtype=np.complex128)]
    kernels += [null_space_basis(powers[k], weyr[k - 1]) for k in range(1, longest + 1)]

    tops: List[Tuple[int, np.ndarray]] = []
    for k in range(longest, 0, -1):
        count = sizes.count(k)
        if count == 0:
            continue
        excluded = [kernels[k - 1]] + [powers[j - k] @ t[:, None] for j, t in tops]
        basis = orthonormal_basis(np.hstack(excluded))
        candidates = kernels[k] - basis @ (basis.conj().T @ kernels[k])
        u, _, _ = np.linalg.svd(candidates, full_matrices=False)
        for t in u[:, :count].T:
            tops.append((k, t))

    chains = []
    for k, t in tops:
        chains.append(np.column_stack([powers[k - 1 - j] @ t for j in range(k)]))
    return chains


def jordan_basis(
    A: ComplexMatrix, S: SpectralData, tols: Optional[ToleranceConfig] = None
) -> ComplexMatrix:
    """Basis P with A = P J P^-1, J in canonical block order, det P = 1.

    Raises:
        IllConditionedJordanError: If the chains are singular or miss the residual bound
    """
    tols = tols or ToleranceConfig()
    A = as_complex_matrix(A)
    chains: List[np.ndarray] = []
    for cluster in S.clusters:
        chains.extend(_cluster_chains(A, cluster))

    P = np.hstack(chains)
    det = complex(np.linalg.det(P))
    if det == 0 or not np.isfinite(det):
        raise IllConditionedJordanError("Jordan chains are linearly dependent", float("inf"))

    # det P = 1 by scaling one whole chain; the shortest chain moves least
    index = min(range(len(chains)), key=lambda i: chains[i].shape[1])
    length = chains[index].shape[1]
    factor = det ** (-1.0 / length)
    start = sum(c.shape[1] for c in chains[:index])
    P[:, start : start + length] *= factor

    condition = float(np.linalg.cond(P))
    J = jordan_matrix(S.blocks())
    residual = frobenius(A @ P - P @ J)
    bound = tols.chain_tol * frobenius(A) * frobenius(P)
    logger.debug("Jordan basis residual %.3e (bound %.3e, condition %.3e)", residual, bound, condition)
    if not residual <= bound:
        raise IllConditionedJordanError(
            f"Jordan basis residual {residual:.3e} exceeds {bound:.3e}", condition
        )
    return P
