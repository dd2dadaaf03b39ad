"""
Complex matrix and polynomial foundation.

Polynomials are stored plainly: ``coeffs[k]`` is the coefficient of ``x**k``.
The alternating convention of trace-coefficient statements,
``x^n - c_{n-1} x^{n-1} + c_{n-2} x^{n-2} - ...``, is converted where it is
used (see ``classification.sl4_coefficients``), never here.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import (
    InvalidInputError,
    NotSpecialLinearError,
    NumericalInconsistencyError,
    SolverFailureError,
)
from .tolerances import ToleranceConfig

logger = logging.getLogger(__name__)

# Square complex128 array; the element g / A of SL(n, C).
ComplexMatrix = np.ndarray

_DEFAULTS = ToleranceConfig()
_EPS = np.finfo(float).eps


def as_complex_matrix(data: Any, name: str = "matrix") -> ComplexMatrix:
    """Validate and copy ``data`` into a square complex128 array.

    Raises:
        InvalidInputError: If the array is not square, empty or has non-finite entries
    """
    try:
        M = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"{name} is not a numeric array: {e}")
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] == 0:
        raise InvalidInputError(f"{name} must have dimension n >= 1")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError(f"{name} has NaN or infinite entries")
    return M


def require_special_linear(A: ComplexMatrix, det_tol: Optional[float] = None) -> complex:
    """Check |det A - 1| <= det_tol and return det A.

    Raises:
        NotSpecialLinearError: If the determinant is too far from one
    """
    tol = _DEFAULTS.det_tol if det_tol is None else det_tol
    det = complex(np.linalg.det(A))
    if not abs(det - 1) <= tol:
        raise NotSpecialLinearError(det, tol)
    return det


def require_invertible(A: ComplexMatrix, det_tol: Optional[float] = None) -> complex:
    """Check that |det A| is bounded away from zero by det_tol."""
    tol = _DEFAULTS.det_tol if det_tol is None else det_tol
    det = complex(np.linalg.det(A))
    if not abs(det) > tol:
        raise InvalidInputError(f"matrix is numerically singular: |det| = {abs(det):.3e}")
    return det


def frobenius(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, "fro"))


def complex_pair(z: complex) -> List[float]:
    """Serialize a complex scalar as [re, im]."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_pairs(M: np.ndarray) -> List[List[List[float]]]:
    """Serialize a complex matrix as nested [re, im] arrays."""
    return [[complex_pair(z) for z in row] for row in np.asarray(M)]


def matrix_from_pairs(rows: Sequence[Sequence[Sequence[float]]]) -> ComplexMatrix:
    return as_complex_matrix([[complex(re, im) for re, im in row] for row in rows])


class Polynomial:
    """Complex-coefficient polynomial, ``coeffs[k]`` multiplying ``x**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex]):
        arr = np.array(list(coeffs), dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("polynomial needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("polynomial has NaN or infinite coefficients")
        self.coeffs = arr

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "Polynomial":
        """Monic polynomial with the given root multiset."""
        roots = np.asarray(list(roots), dtype=np.complex128)
        if roots.size == 0:
            return cls([1.0])
        coeffs = P.polyfromroots(roots).astype(np.complex128)
        coeffs[-1] = 1.0
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs[-1] == 1)

    @property
    def constant(self) -> complex:
        return complex(self.coeffs[0])

    def __call__(self, x: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        return P.polyval(x, self.coeffs)

    def derivative(self, order: int = 1) -> "Polynomial":
        if order > self.degree:
            return Polynomial([0.0])
        return Polynomial(P.polyder(self.coeffs, order))

    def monic(self) -> "Polynomial":
        lead = self.coeffs[-1]
        if lead == 0:
            raise InvalidInputError("polynomial has zero leading coefficient")
        coeffs = self.coeffs / lead
        coeffs[-1] = 1.0
        return Polynomial(coeffs)

    def evaluate_matrix(self, A: ComplexMatrix) -> ComplexMatrix:
        """p(A) by Horner's rule."""
        n = A.shape[0]
        result = np.zeros((n, n), dtype=np.complex128)
        identity = np.eye(n, dtype=np.complex128)
        for c in self.coeffs[::-1]:
            result = result @ A + c * identity
        return result

    def distance(self, other: "Polynomial") -> float:
        """Max coefficient distance, zero-padding the shorter polynomial."""
        size = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(size, dtype=np.complex128)
        b = np.zeros(size, dtype=np.complex128)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return float(np.max(np.abs(a - b)))

    def to_json(self) -> List[List[float]]:
        return [complex_pair(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, pairs: Sequence[Sequence[float]]) -> "Polynomial":
        return cls(complex(re, im) for re, im in pairs)

    def __repr__(self) -> str:
        terms = ", ".join(f"{c.real:.6g}{c.imag:+.6g}j" for c in self.coeffs)
        return f"Polynomial([{terms}])"


@dataclass(frozen=True)
class RootCluster:
    """Group of numerically coincident roots.

    Attributes:
        value: Cluster representative
        multiplicity: Number of roots in the cluster
        radius: Max distance of a member root to the representative
        members: Approximate roots the cluster was formed from
    """

    value: complex
    multiplicity: int
    radius: float
    members: Tuple[complex, ...] = field(default=(), compare=False, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": complex_pair(self.value),
            "multiplicity": self.multiplicity,
            "radius": self.radius,
        }


def char_poly(A: ComplexMatrix) -> Polynomial:
    """Characteristic polynomial det(xI - A) from Newton's identities on tr(A^k).

    Raises:
        InvalidInputError: If A is not a non-empty finite square matrix
    """
    A = as_complex_matrix(A)
    n = A.shape[0]

    power_sums = np.empty(n, dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for k in range(n):
        power = power @ A
        power_sums[k] = np.trace(power)

    # e[k]: k-th elementary symmetric function of the eigenvalues
    e = np.zeros(n + 1, dtype=np.complex128)
    e[0] = 1.0
    for k in range(1, n + 1):
        acc = 0j
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * power_sums[i - 1]
        e[k] = acc / k

    coeffs = np.empty(n + 1, dtype=np.complex128)
    for j in range(n + 1):
        coeffs[j] = (-1) ** (n - j) * e[n - j]
    coeffs[n] = 1.0
    return Polynomial(coeffs)


def _aberth(
    coeffs: np.ndarray, solver_tol: float, max_iterations: int
) -> np.ndarray:
    """Aberth-Ehrlich simultaneous iteration on a monic polynomial."""
    n = coeffs.size - 1
    if n == 1:
        return np.array([-coeffs[0]], dtype=np.complex128)

    dcoeffs = P.polyder(coeffs)
    abs_coeffs = np.abs(coeffs)

    # Initial guesses on a circle enclosing every root, rotated off the axes
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1])))
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z = radius * np.exp(1j * angles)
    active = np.ones(n, dtype=bool)

    for iteration in range(max_iterations):
        pz = P.polyval(z, coeffs)
        scale = P.polyval(np.abs(z), abs_coeffs)
        active &= ~(np.abs(pz) <= solver_tol * scale)
        if not active.any():
            logger.debug("Aberth converged after %d iterations (degree %d)", iteration, n)
            return z

        dpz = P.polyval(z, dcoeffs)
        diff = z[:, None] - z[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(diff != 0, 1.0 / diff, 0.0)
            np.fill_diagonal(inv, 0.0)
            repulsion = inv.sum(axis=1)
            correction = 1.0 / (dpz / pz - repulsion)

        bad = active & ~np.isfinite(correction)
        if bad.any():
            # Nudge stuck iterates along a fixed direction
            correction[bad] = -1e-6 * (1.0 + np.abs(z[bad])) * np.exp(2.399963j * np.arange(bad.sum()))
        correction[~active] = 0.0
        z = z - correction

        stagnated = active & ~bad & (np.abs(correction) <= 4.0 * _EPS * np.abs(z))
        active &= ~stagnated

    pz = P.polyval(z, coeffs)
    residual = float(np.max(np.abs(pz) / P.polyval(np.abs(z), abs_coeffs)))
    raise SolverFailureError(
        f"Aberth iteration did not converge in {max_iterations} iterations "
        f"(max relative residual {residual:.3e})",
        best_iterate=z,
    )


# Members of a merged cluster must lie within this many perturbation radii of its centre
MERGE_FACTOR = 3.0


def perturbation_radius(coeffs: np.ndarray, center: complex, multiplicity: int, root_noise: float) -> float:
    """How far relative coefficient noise can move an m-fold root of p at ``center``.

    Near an m-fold root p(z) ~ a_m (z - c)^m with a_m = p^(m)(c) / m!, so a
    perturbation of size root_noise * p~(|c|) moves it by (noise / |a_m|)^(1/m).
    """
    a_m = abs(complex(P.polyval(center, P.polyder(coeffs, multiplicity)))) / math.factorial(multiplicity)
    noise = (root_noise + 8.0 * _EPS) * float(P.polyval(abs(center), np.abs(coeffs)))
    if a_m == 0:
        return math.inf
    return float((noise / a_m) ** (1.0 / multiplicity))


def _polish(coeffs: np.ndarray, center: complex, multiplicity: int, guard: float) -> complex:
    """Newton on p^(m-1), whose simple root is the m-fold root of p."""
    target = P.polyder(coeffs, multiplicity - 1)
    slope = P.polyder(coeffs, multiplicity)
    z = complex(center)
    for _ in range(30):
        f = P.polyval(z, target)
        df = P.polyval(z, slope)
        if df == 0 or not np.isfinite(f):
            break
        step = f / df
        if not np.isfinite(step):
            break
        z_new = z - step
        if abs(z_new - center) > guard:
            return complex(center)
        z = complex(z_new)
        if abs(step) <= 4.0 * _EPS * max(1.0, abs(z)):
            break
    return z


def _make_cluster(values: np.ndarray, coeffs: np.ndarray, cluster_tol: float) -> RootCluster:
    center = complex(np.mean(values))
    spread = float(np.max(np.abs(values - center)))
    guard = 10.0 * max(spread, cluster_tol * max(1.0, abs(center)))
    value = _polish(coeffs, center, values.size, guard)
    return RootCluster(
        value=value,
        multiplicity=int(values.size),
        radius=float(np.max(np.abs(values - value))),
        members=tuple(complex(v) for v in values),
    )


def _single_root_like(values: np.ndarray, coeffs: np.ndarray, cluster_tol: float, root_noise: float) -> bool:
    center = complex(np.mean(values))
    spread = float(np.max(np.abs(values - center)))
    if spread <= cluster_tol * max(1.0, abs(center)):
        return True
    return spread <= MERGE_FACTOR * perturbation_radius(coeffs, center, values.size, root_noise)


def _sorted_edges(values: np.ndarray) -> List[Tuple[float, int, int]]:
    n = values.size
    return sorted((abs(values[i] - values[j]), i, j) for i in range(n) for j in range(i + 1, n))


def cluster_roots(
    roots: np.ndarray,
    coeffs: np.ndarray,
    cluster_tol: float,
    root_noise: float,
) -> List[RootCluster]:
    """Agglomerative clustering, closest pairs first.

    Two groups merge when a pair of their roots is within 2 * cluster_tol
    (relative), or when the merged group cannot be told apart from one
    multiple root under coefficient noise ``root_noise``.
    """
    n = roots.size
    owner = list(range(n))
    groups: Dict[int, List[int]] = {i: [i] for i in range(n)}

    for dist, i, j in _sorted_edges(roots):
        a, b = owner[i], owner[j]
        if a == b:
            continue
        near = 2.0 * cluster_tol * max(1.0, abs(roots[i]), abs(roots[j]))
        merged = groups[a] + groups[b]
        if dist <= near or _single_root_like(roots[merged], coeffs, cluster_tol, root_noise):
            for k in groups[b]:
                owner[k] = a
            groups[a] = merged
            del groups[b]

    clusters = [_make_cluster(roots[members], coeffs, cluster_tol) for members in groups.values()]
    clusters.sort(key=lambda c: (-abs(c.value), np.angle(c.value)))
    logger.debug(
        "Clustered %d roots into %s",
        n,
        [(complex(round(c.value.real, 10), round(c.value.imag, 10)), c.multiplicity) for c in clusters],
    )
    return clusters


def split_cluster(cluster: RootCluster, coeffs: np.ndarray, cluster_tol: float) -> List[RootCluster]:
    """Cut a cluster in two along the longest edge of its minimum spanning tree.

    Raises:
        InvalidInputError: If the cluster carries fewer than two member roots
    """
    values = np.array(cluster.members, dtype=np.complex128)
    if values.size < 2:
        raise InvalidInputError("cannot split a cluster with fewer than two member roots")
    owner = list(range(values.size))
    components = values.size
    for _, i, j in _sorted_edges(values):
        if components == 2:
            break
        a, b = owner[i], owner[j]
        if a != b:
            owner = [a if o == b else o for o in owner]
            components -= 1
    parts = [np.array([v for v, o in zip(values, owner) if o == label]) for label in sorted(set(owner))]
    return [_make_cluster(part, coeffs, cluster_tol) for part in parts]


def poly_roots(
    p: Polynomial,
    cluster_tol: Optional[float] = None,
    *,
    solver_tol: Optional[float] = None,
    max_iterations: Optional[int] = None,
    root_noise: Optional[float] = None,
) -> List[RootCluster]:
    """Roots of ``p`` grouped into clusters with multiplicities.

    Clusters are ordered by decreasing modulus, then increasing argument.

    Raises:
        InvalidInputError: If p has degree 0 or a zero leading coefficient
        SolverFailureError: If the Aberth iteration does not converge
    """
    cluster_tol = _DEFAULTS.cluster_tol if cluster_tol is None else cluster_tol
    solver_tol = _DEFAULTS.solver_tol if solver_tol is None else solver_tol
    max_iterations = _DEFAULTS.max_iterations if max_iterations is None else max_iterations
    root_noise = _DEFAULTS.root_noise if root_noise is None else root_noise

    if p.degree < 1:
        raise InvalidInputError("poly_roots needs a polynomial of degree >= 1")
    monic = p if p.is_monic else p.monic()
    roots = _aberth(monic.coeffs, solver_tol, max_iterations)
    return cluster_roots(roots, monic.coeffs, cluster_tol, root_noise)


def sylvester_matrix(p: Polynomial, q: Polynomial) -> np.ndarray:
    """(deg p + deg q)-square Sylvester matrix, coefficients in descending powers."""
    n, m = p.degree, q.degree
    size = n + m
    S = np.zeros((size, size), dtype=np.complex128)
    pd = p.coeffs[::-1]
    qd = q.coeffs[::-1]
    for i in range(m):
        S[i, i : i + n + 1] = pd
    for i in range(n):
        S[m + i, i : i + m + 1] = qd
    return S


def sylvester_condition(p: Polynomial, q: Polynomial) -> float:
    """2-norm condition number of the row-equilibrated Sylvester matrix of p and q.

    Row scaling leaves singularity unchanged; the result measures how close
    p and q are to sharing a root, independent of coefficient magnitudes.
    """
    S = sylvester_matrix(p, q)
    s = np.linalg.svd(S / np.linalg.norm(S, axis=1)[:, None], compute_uv=False)
    if s[-1] == 0:
        return float("inf")
    return float(s[0] / s[-1])


def resultant(p: Polynomial, q: Polynomial) -> complex:
    """Resultant of p and q as the Sylvester determinant (LU, partial pivoting).

    Raises:
        InvalidInputError: If either degree is below one
        NumericalInconsistencyError: If the determinant overflows
    """
    if p.degree < 1 or q.degree < 1:
        raise InvalidInputError("resultant needs polynomials of degree >= 1")
    S = sylvester_matrix(p, q)
    with np.errstate(over="ignore", invalid="ignore"):
        value = complex(np.linalg.det(S))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericalInconsistencyError(
            f"Sylvester determinant overflowed (size {S.shape[0]})"
        )
    return value


def c_dual(p: Polynomial) -> Polynomial:
    """Monic polynomial whose roots are conj(lambda)^-1 over the roots of p.

    Raises:
        InvalidInputError: If the constant term is zero
    """
    a0 = p.coeffs[0]
    if a0 == 0:
        raise InvalidInputError("c_dual needs a nonzero constant term (root at 0 has no dual)")
    coeffs = np.conj(p.coeffs[::-1]) / np.conj(a0)
    coeffs[-1] = 1.0
    return Polynomial(coeffs)


def is_c_reciprocal(p: Polynomial, tol: Optional[float] = None) -> bool:
    """True iff p matches its c-dual coefficientwise within tol * max(1, max|a_k|)."""
    tol = _DEFAULTS.coeff_tol if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    return p.distance(c_dual(p)) <= tol * scale


class BinomialIdentity(str, Enum):
    """Alternating binomial sums that vanish identically."""

    # C(n-1, r) - C(n, r+1) + C(n, r+2) - ... + (-1)^(n-r) C(n, n)
    ALTERNATING_TAIL = "alternating-tail"
    # sum_{j=k}^{n} (-1)^(j-k) C(j, k) C(n, j)
    WEIGHTED_ALTERNATING = "weighted-alternating"

    # short names, also accepted as strings ("BL1", "bl2")
    BL1 = "alternating-tail"
    BL2 = "weighted-alternating"

    @classmethod
    def _missing_(cls, value: object) -> Optional["BinomialIdentity"]:
        if isinstance(value, str):
            return cls.__members__.get(value.upper())
        return None


def binomial_identity_check(kind: Union[BinomialIdentity, str], n: int, r_or_k: int) -> int:
    """Exact integer value of the alternating sum; zero whenever arguments are valid.

    Raises:
        InvalidInputError: If r_or_k >= n, r_or_k < 0, or n <= 1 for the tail identity
    """
    kind = BinomialIdentity(kind)
    if not (isinstance(n, int) and isinstance(r_or_k, int)):
        raise InvalidInputError("binomial identities take integer arguments")
    if r_or_k < 0 or r_or_k >= n:
        raise InvalidInputError(f"need 0 <= r < n, got n={n}, r={r_or_k}")

    if kind is BinomialIdentity.ALTERNATING_TAIL:
        if n <= 1:
            raise InvalidInputError(f"the alternating tail identity needs n > 1, got n={n}")
        r = r_or_k
        total = math.comb(n - 1, r)
        for j in range(r + 1, n + 1):
            total += (-1) ** (j - r) * math.comb(n, j)
        return total

    k = r_or_k
    return sum((-1) ** (j - k) * math.comb(j, k) * math.comb(n, j) for j in range(k, n + 1))


def numeric_rank(M: np.ndarray, rank_tol: Optional[float] = None, scale: float = 0.0) -> int:
    """Number of singular values above rank_tol * max(sigma_max, scale)."""
    rank_tol = _DEFAULTS.rank_tol if rank_tol is None else rank_tol
    M = np.atleast_2d(np.asarray(M, dtype=np.complex128))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    threshold = rank_tol * max(float(s[0]), scale)
    return int(np.sum(s > threshold))


def null_space_basis(M: np.ndarray, dimension: int) -> np.ndarray:
    """Orthonormal basis (columns) of the ``dimension`` smallest right singular directions."""
    n = M.shape[1]
    if dimension <= 0:
        return np.zeros((n, 0), dtype=np.complex128)
    _, _, vh = np.linalg.svd(M)
    return vh[n - dimension :].conj().T


def orthonormal_basis(vectors: np.ndarray, rank_tol: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis of the column span (SVD, numerically rank-revealing)."""
    if vectors.shape[1] == 0:
        return vectors
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    rank = numeric_rank(vectors, rank_tol) if s.size else 0
    return u[:, :rank]

