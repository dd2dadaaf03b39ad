"""
Generators for structured SL(n, C) elements.

Every generator takes a seeded ``numpy.random.Generator``. Spectra are laid
out on well-separated angular slots so that eigenvalue clusters stay apart
after conjugation, and every spectrum is rotated onto det = 1.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import InvalidInputError
from .numerics import ComplexMatrix
from .spectral import JordanBlockSpec, jordan_matrix

MODULUS_RANGE = (1.5, 2.5)


def random_unitary(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def random_conjugator(n: int, cond: float, rng: np.random.Generator) -> ComplexMatrix:
    """Random det-1 matrix with 2-norm condition number ``cond``."""
    if cond < 1:
        raise InvalidInputError(f"condition number must be >= 1, got {cond}")
    singular_values = cond ** np.linspace(0.0, 1.0, n)
    K = random_unitary(n, rng) @ np.diag(singular_values) @ random_unitary(n, rng)
    det = complex(np.linalg.det(K))
    return K / det ** (1.0 / n)


def conjugate(J: ComplexMatrix, rng: np.random.Generator, cond: float = 5.0) -> ComplexMatrix:
    """K J K^-1 for a random det-1 K with the given condition number."""
    K = random_conjugator(J.shape[0], cond, rng)
    return K @ J @ np.linalg.inv(K)


def random_special_linear(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Complex Gaussian matrix rescaled to det 1."""
    while True:
        M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        det = complex(np.linalg.det(M))
        if abs(det) > 1e-3:
            return M / det ** (1.0 / n)


def angular_slots(count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` arguments spread evenly around the circle with small jitter."""
    base = rng.uniform(0, 2 * np.pi)
    jitter = rng.uniform(-0.1, 0.1, size=count)
    return base + 2 * np.pi * np.arange(count) / count + jitter


def normalize_blocks(blocks: Sequence[JordanBlockSpec]) -> List[JordanBlockSpec]:
    """Rotate every eigenvalue by one unit phase so that the determinant is 1.

    The product of a c-reciprocal spectrum has modulus 1, so the rotation
    keeps unit eigenvalues on the circle and conj-inverse pairs paired.
    """
    n = sum(b.size for b in blocks)
    log_det = sum(b.size * np.log(complex(b.eigenvalue)) for b in blocks)
    omega = np.exp(-log_det / n)
    return [JordanBlockSpec(complex(omega * b.eigenvalue), b.size) for b in blocks]


def _block_sizes(rng: np.random.Generator, max_block: int, max_blocks: int = 2) -> List[int]:
    count = int(rng.integers(1, max_blocks + 1))
    return sorted((int(rng.integers(1, max_block + 1)) for _ in range(count)), reverse=True)


def _modulus(rng: np.random.Generator) -> float:
    return float(rng.uniform(*MODULUS_RANGE))


def pairable_jordan_blocks(
    rng: np.random.Generator,
    max_dim: int = 8,
    max_block: int = 2,
    units: bool = True,
    pairs: bool = True,
) -> List[JordanBlockSpec]:
    """Random c-reversible Jordan content: conj-inverse pairs with equal block sizes, unit blocks.

    ``max_block = 1`` gives semisimple content.
    """
    if not (units or pairs):
        raise InvalidInputError("need unit blocks, pairs or both")
    kinds = [k for k, on in (("unit", units), ("pair", pairs)) if on]
    slots = angular_slots(int(rng.integers(2, 5)), rng)

    blocks: List[JordanBlockSpec] = []
    dim = 0
    for i, phi in enumerate(slots):
        kind = kinds[i % len(kinds)] if i < len(kinds) else kinds[int(rng.integers(len(kinds)))]
        sizes = _block_sizes(rng, max_block)
        weight = 2 if kind == "pair" else 1
        while sizes and dim + weight * sum(sizes) > max_dim:
            sizes.pop()
        if not sizes:
            continue
        if kind == "unit":
            lam = np.exp(1j * phi)
            blocks.extend(JordanBlockSpec(lam, s) for s in sizes)
        else:
            rho = _modulus(rng)
            lam = rho * np.exp(1j * phi)
            partner = 1.0 / np.conj(lam)
            blocks.extend(JordanBlockSpec(lam, s) for s in sizes)
            blocks.extend(JordanBlockSpec(partner, s) for s in sizes)
        dim += weight * sum(sizes)
    if not blocks:
        phi = slots[0]
        if units:
            blocks.append(JordanBlockSpec(np.exp(1j * phi), 1))
        else:
            lam = _modulus(rng) * np.exp(1j * phi)
            blocks += [JordanBlockSpec(lam, 1), JordanBlockSpec(1.0 / np.conj(lam), 1)]
    return normalize_blocks(blocks)


def unpairable_jordan_blocks(
    rng: np.random.Generator, max_dim: int = 8, defect: Optional[str] = None
) -> List[JordanBlockSpec]:
    """Jordan content that fails pairing.

    ``defect`` is "mismatch" (J(lambda, 2) against two J(conj(lambda)^-1, 1))
    or "unmatched" (two non-unit eigenvalues that are not conj-inverse).
    """
    defect = defect or ("mismatch" if rng.random() < 0.5 else "unmatched")
    slots = angular_slots(3, rng)
    rho = _modulus(rng)
    if defect == "mismatch":
        lam = rho * np.exp(1j * slots[0])
        partner = 1.0 / np.conj(lam)
        blocks = [JordanBlockSpec(lam, 2), JordanBlockSpec(partner, 1), JordanBlockSpec(partner, 1)]
    elif defect == "unmatched":
        blocks = [
            JordanBlockSpec(rho * np.exp(1j * slots[0]), 1),
            JordanBlockSpec(np.exp(1j * slots[1]) / rho, 1),
        ]
    else:
        raise InvalidInputError(f"unknown defect '{defect}'")

    dim = sum(b.size for b in blocks)
    if dim < max_dim:
        # filler on the remaining slot keeps the rest of the spectrum reversible
        blocks.append(JordanBlockSpec(np.exp(1j * slots[2]), min(2, max_dim - dim)))
    return normalize_blocks(blocks)


def regular_c_reciprocal_spectrum(r: int, s: int, rng: np.random.Generator) -> np.ndarray:
    """2r + s distinct eigenvalues: r conj-inverse pairs and s unit eigenvalues, product 1."""
    if r < 0 or s < 0 or 2 * r + s < 1:
        raise InvalidInputError(f"need r, s >= 0 and 2r + s >= 1, got r={r}, s={s}")
    slots = angular_slots(r + s, rng)
    rng.shuffle(slots)
    blocks: List[JordanBlockSpec] = []
    for phi in slots[:r]:
        lam = _modulus(rng) * np.exp(1j * phi)
        blocks.append(JordanBlockSpec(lam, 1))
        blocks.append(JordanBlockSpec(1.0 / np.conj(lam), 1))
    for phi in slots[r:]:
        blocks.append(JordanBlockSpec(np.exp(1j * phi), 1))
    return np.array([b.eigenvalue for b in normalize_blocks(blocks)])


def tension_blocks(lam: complex) -> List[JordanBlockSpec]:
    """J(l,2) + J(l,1) + J(l,1) + J(m,2) + J(m,2), m = conj(l)^-1: c-reciprocal polynomials, unpairable."""
    if abs(abs(lam) - 1) < 1e-6 or lam == 0:
        raise InvalidInputError("tension construction needs |lambda| != 1")
    partner = 1.0 / np.conj(lam)
    return normalize_blocks(
        [
            JordanBlockSpec(lam, 2),
            JordanBlockSpec(lam, 1),
            JordanBlockSpec(lam, 1),
            JordanBlockSpec(partner, 2),
            JordanBlockSpec(partner, 2),
        ]
    )


def tension_matrix(lam: complex = 2.0) -> ComplexMatrix:
    return jordan_matrix(tension_blocks(lam))


# SL(4, C) families of the trace-coefficient decision tree


def _unit(theta: float) -> complex:
    return complex(np.exp(1j * theta))


def _sign(rng: np.random.Generator) -> float:
    return 1.0 if rng.random() < 0.5 else -1.0


def _diag(*values: complex) -> ComplexMatrix:
    return np.diag(np.array(values, dtype=np.complex128))


def case1_diagonal_pairs(rng: np.random.Generator) -> ComplexMatrix:
    """diag(r e^{it}, r^-1 e^{it}, s e^{-it}, s^-1 e^{-it})."""
    theta = rng.uniform(0.4, 1.1)
    r = rng.uniform(1.5, 2.0)
    s = rng.uniform(2.4, 3.0)
    return _diag(r * _unit(theta), _unit(theta) / r, s * _unit(-theta), _unit(-theta) / s)


def case1_pair_and_units(rng: np.random.Generator) -> ComplexMatrix:
    """diag(r e^{it}, r^-1 e^{it}, e^{ip}, e^{-i(2t + p)})."""
    theta = rng.uniform(0.4, 1.1)
    phi = np.pi / 2 - theta + rng.uniform(-0.3, 0.3)
    r = _modulus(rng)
    return _diag(r * _unit(theta), _unit(theta) / r, _unit(phi), _unit(-(2 * theta + phi)))


def case1_paired_blocks(rng: np.random.Generator) -> ComplexMatrix:
    """J(r e^{it}, 2) + J(r^-1 e^{it}, 2) with e^{4it} = 1."""
    theta = np.pi / 2 * int(rng.integers(4))
    r = _modulus(rng)
    return jordan_matrix([JordanBlockSpec(r * _unit(theta), 2), JordanBlockSpec(_unit(theta) / r, 2)])


def case1_unit_block(rng: np.random.Generator) -> ComplexMatrix:
    """J(e^{it}, 2) + diag(r e^{-it}, r^-1 e^{-it})."""
    theta = rng.uniform(0, 2 * np.pi)
    r = _modulus(rng)
    return jordan_matrix(
        [
            JordanBlockSpec(_unit(theta), 2),
            JordanBlockSpec(r * _unit(-theta), 1),
            JordanBlockSpec(_unit(-theta) / r, 1),
        ]
    )


def case2(rng: np.random.Generator) -> ComplexMatrix:
    """diag(r e^{it}, r e^{it}, r^-1 e^{it}, r^-1 e^{it}) with e^{4it} = 1."""
    theta = np.pi / 2 * int(rng.integers(4))
    r = _modulus(rng)
    lam = r * _unit(theta)
    return _diag(lam, lam, _unit(theta) / r, _unit(theta) / r)


def a1(rng: np.random.Generator, r: Optional[float] = None) -> ComplexMatrix:
    """J(r, 2) + diag(r^-1, r^-1), r real with |r| != 1."""
    r = r if r is not None else _sign(rng) * _modulus(rng)
    return jordan_matrix([JordanBlockSpec(r, 2), JordanBlockSpec(1 / r, 1), JordanBlockSpec(1 / r, 1)])


def a2(rng: np.random.Generator, r: Optional[float] = None) -> ComplexMatrix:
    """J(ri, 2) + diag(r^-1 i, r^-1 i)."""
    r = r if r is not None else _sign(rng) * _modulus(rng)
    return jordan_matrix(
        [JordanBlockSpec(1j * r, 2), JordanBlockSpec(1j / r, 1), JordanBlockSpec(1j / r, 1)]
    )


def a3(rng: np.random.Generator) -> ComplexMatrix:
    """diag(e^{it}, e^{it}, r e^{-it}, r^-1 e^{-it}) with a trace that is neither real nor imaginary."""
    theta = rng.uniform(0.4, 1.1) + (np.pi / 2) * int(rng.integers(4))
    r = _modulus(rng)
    return _diag(_unit(theta), _unit(theta), r * _unit(-theta), _unit(-theta) / r)


def a3_pm1(
    rng: np.random.Generator, sign: Optional[float] = None, r: Optional[float] = None
) -> ComplexMatrix:
    """diag(s, s, r, r^-1), s = +-1."""
    sign = sign if sign is not None else _sign(rng)
    r = r if r is not None else _modulus(rng)
    return _diag(sign, sign, r, 1 / r)


def a3_pmi(
    rng: np.random.Generator, sign: Optional[float] = None, r: Optional[float] = None
) -> ComplexMatrix:
    """diag(si, si, ri, r^-1 i), s = +-1."""
    sign = sign if sign is not None else _sign(rng)
    r = r if r is not None else _modulus(rng)
    return _diag(sign * 1j, sign * 1j, 1j * r, 1j / r)


def bounded_sl4(rng: np.random.Generator) -> ComplexMatrix:
    """Elliptic (four unit eigenvalues) or parabolic (a unit block of size 2) SL(4) element."""
    sizes = [1, 1, 1, 1] if rng.random() < 0.5 else [2, 1, 1]
    slots = angular_slots(len(sizes), rng)
    blocks = [JordanBlockSpec(_unit(phi), size) for phi, size in zip(slots, sizes)]
    return jordan_matrix(normalize_blocks(blocks))


def generic_sl4(rng: np.random.Generator) -> ComplexMatrix:
    return random_special_linear(4, rng)


@dataclass(frozen=True)
class SL4Family:
    """A family of the SL(4) decision tree with the verdict and branch it must reach."""

    name: str
    sample: Callable[[np.random.Generator], ComplexMatrix]
    verdict: bool
    branch: str


SL4_FAMILIES: Dict[str, SL4Family] = {
    f.name: f
    for f in (
        SL4Family("generic", generic_sl4, False, "not-c-reciprocal"),
        SL4Family("bounded", bounded_sl4, True, "trace-bounded"),
        SL4Family("case1-diagonal-pairs", case1_diagonal_pairs, True, "minpoly-degree"),
        SL4Family("case1-pair-and-units", case1_pair_and_units, True, "minpoly-degree"),
        SL4Family("case1-paired-blocks", case1_paired_blocks, True, "minpoly-degree"),
        SL4Family("case1-unit-block", case1_unit_block, True, "minpoly-degree"),
        SL4Family("case2", case2, True, "minpoly-degree"),
        SL4Family("a1", a1, False, "real-trace"),
        SL4Family("a2", a2, False, "imaginary-trace"),
        SL4Family("a3", a3, True, "mixed-trace"),
        SL4Family("a3-pm1", a3_pm1, True, "real-trace"),
        SL4Family("a3-pmi", a3_pmi, True, "imaginary-trace"),
    )
}


def sl4_sample(name: str, rng: np.random.Generator, cond: float = 5.0) -> Tuple[ComplexMatrix, SL4Family]:
    """A conjugated member of the named SL(4) family."""
    if name not in SL4_FAMILIES:
        raise InvalidInputError(f"Unknown SL(4) family '{name}'. Available: {', '.join(SL4_FAMILIES)}")
    family = SL4_FAMILIES[name]
    return conjugate(family.sample(rng), rng, cond), family
