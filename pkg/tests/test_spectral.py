import numpy as np
import pytest
from numpy.testing import assert_allclose

from conjugate_reversibility import numerics
from conjugate_reversibility.exceptions import InvalidInputError
from conjugate_reversibility.families import conjugate, pairable_jordan_blocks
from conjugate_reversibility.numerics import frobenius
from conjugate_reversibility.spectral import (
    EigenCluster,
    JordanBlockSpec,
    SpectralData,
    eigen_structure,
    jordan_basis,
    jordan_block,
    jordan_matrix,
    minimal_polynomial,
    segre_to_weyr,
    weyr_to_segre,
)


def _blocks_by_eigenvalue(S):
    return {(round(c.eigenvalue.real, 6), round(c.eigenvalue.imag, 6)): c.block_sizes for c in S.clusters}


def _partitions(n, largest=None):
    """Partitions of n as descending tuples."""
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


class TestJordanMatrices:
    def test_block(self):
        assert_allclose(jordan_block(2.0, 2), [[2, 1], [0, 2]])

    def test_direct_sum(self):
        J = jordan_matrix([JordanBlockSpec(2.0, 2), JordanBlockSpec(0.25, 1)])
        assert J.shape == (3, 3)
        assert J[0, 1] == 1 and J[1, 2] == 0
        assert J[2, 2] == 0.25

    def test_invalid_size(self):
        with pytest.raises(InvalidInputError):
            JordanBlockSpec(1.0, 0)


class TestWeyr:
    @pytest.mark.parametrize(
        "sizes,weyr",
        [((1,), [1]), ((2,), [1, 2]), ((2, 1, 1), [3, 4]), ((3, 1), [2, 3, 4]), ((2, 2), [2, 4])],
    )
    def test_conversions(self, sizes, weyr):
        assert segre_to_weyr(sizes) == weyr
        assert weyr_to_segre(weyr) == sizes

    @pytest.mark.parametrize("weyr", [[], [2, 2], [1, 3]])
    def test_invalid_weyr(self, weyr):
        with pytest.raises(InvalidInputError):
            weyr_to_segre(weyr)

    def test_round_trip_over_all_partitions(self):
        assert sum(1 for _ in _partitions(12)) == 77
        for n in range(1, 13):
            for sizes in _partitions(n):
                weyr = segre_to_weyr(sizes)
                assert weyr[-1] == n
                assert len(weyr) == sizes[0]
                assert weyr_to_segre(weyr) == sizes


class TestEigenStructure:
    def test_diagonal(self):
        S = eigen_structure(np.diag([2.0, 0.5]))
        assert S.multiplicities == (1, 1)
        assert S.regular and S.semisimple
        assert_allclose(S.eigenvalues, [2.0, 0.5], atol=1e-12)

    def test_canonical_order(self):
        S = eigen_structure(np.diag([0.5, 1j, 2.0, -1j]))
        values = S.eigenvalues
        assert values[0] == pytest.approx(2.0)
        assert values[-1] == pytest.approx(0.5)
        # unit-modulus eigenvalues sorted by argument
        assert values[1] == pytest.approx(-1j)
        assert values[2] == pytest.approx(1j)

    def test_identity(self):
        S = eigen_structure(np.eye(4))
        assert len(S.clusters) == 1
        assert S.clusters[0].block_sizes == (1, 1, 1, 1)

    def test_jordan_blocks_of_exact_form(self):
        J = jordan_matrix([JordanBlockSpec(2.0, 2), JordanBlockSpec(0.5, 1), JordanBlockSpec(0.5, 1)])
        S = eigen_structure(J)
        assert _blocks_by_eigenvalue(S) == {(2.0, 0.0): (2,), (0.5, 0.0): (1, 1)}
        assert not S.semisimple

    def test_conjugated_jordan_content(self, rng):
        blocks = pairable_jordan_blocks(rng, max_dim=6)
        A = conjugate(jordan_matrix(blocks), rng, cond=3.0)
        S = eigen_structure(A)
        assert S.dimension == sum(b.size for b in blocks)
        assert sorted(b.size for b in S.blocks()) == sorted(b.size for b in blocks)
        assert S.determinant == pytest.approx(1.0, abs=1e-8)

    def _ring_next_to_pair(self):
        lam, mu = np.exp(0.59j), np.exp(-1.47j)
        J = jordan_matrix([JordanBlockSpec(lam, 3), JordanBlockSpec(lam, 2), JordanBlockSpec(mu, 2)])
        return lam, mu, J

    def _assert_ring_next_to_pair(self, S, lam, mu):
        blocks = {c.multiplicity: c for c in S.clusters}
        assert sorted(blocks) == [2, 5]
        assert blocks[5].block_sizes == (3, 2)
        assert blocks[2].block_sizes == (2,)
        assert abs(blocks[5].eigenvalue - lam) <= 1e-5
        assert abs(blocks[2].eigenvalue - mu) <= 1e-5

    def test_defective_eigenvalue_beside_another(self):
        lam, mu, J = self._ring_next_to_pair()
        self._assert_ring_next_to_pair(eigen_structure(J), lam, mu)

    def test_defective_eigenvalue_beside_another_conjugated(self, rng):
        lam, mu, J = self._ring_next_to_pair()
        for _ in range(10):
            self._assert_ring_next_to_pair(eigen_structure(conjugate(J, rng, cond=50.0)), lam, mu)

    def test_rejected_merge_is_split(self, monkeypatch):
        lam, mu, J = self._ring_next_to_pair()
        # force every root into one cluster; rank evidence must pull them apart again
        monkeypatch.setattr(numerics, "MERGE_FACTOR", 1e6)
        S = eigen_structure(J)
        self._assert_ring_next_to_pair(S, lam, mu)

    @pytest.mark.slow
    def test_block_size_three_ensemble(self, rng):
        for _ in range(200):
            blocks = pairable_jordan_blocks(rng, max_dim=8, max_block=3)
            A = conjugate(jordan_matrix(blocks), rng, cond=50.0)
            S = eigen_structure(A)
            assert sorted(b.size for b in S.blocks()) == sorted(b.size for b in blocks)
            assert S.dimension == sum(b.size for b in blocks)

    def test_singular_rejected(self):
        with pytest.raises(InvalidInputError):
            eigen_structure(np.diag([1.0, 0.0]))

    def test_minimal_polynomial(self):
        J = jordan_matrix([JordanBlockSpec(2.0, 2), JordanBlockSpec(0.5, 1), JordanBlockSpec(0.5, 1)])
        m = minimal_polynomial(eigen_structure(J))
        assert m.degree == 3
        assert np.linalg.norm(m.evaluate_matrix(J)) <= 1e-9

    def test_round_trip_dict(self):
        S = eigen_structure(np.diag([2.0, 0.5]), with_basis=True)
        restored = SpectralData.from_dict(S.to_dict())
        assert restored == S
        assert_allclose(restored.jordan_basis, S.jordan_basis)


class TestJordanBasis:
    def test_reconstructs_matrix(self, rng):
        for _ in range(5):
            blocks = pairable_jordan_blocks(rng, max_dim=6)
            A = conjugate(jordan_matrix(blocks), rng, cond=3.0)
            S = eigen_structure(A, with_basis=True)
            P = S.jordan_basis
            J = jordan_matrix(S.blocks())
            assert frobenius(A @ P - P @ J) <= 1e-8 * frobenius(A) * frobenius(P)
            assert complex(np.linalg.det(P)) == pytest.approx(1.0, abs=1e-8)
            assert S.basis_condition == pytest.approx(np.linalg.cond(P))

    def test_explicit_call(self):
        A = np.array([[1.0, 1.0], [0.0, 1.0]])
        S = eigen_structure(A)
        assert S.clusters[0].block_sizes == (2,)
        P = jordan_basis(A, S)
        assert_allclose(A @ P, P @ jordan_block(1.0, 2), atol=1e-10)


def test_cluster_properties():
    c = EigenCluster(2.0, (2, 1))
    assert c.multiplicity == 3
    assert c.largest_block == 2
    assert c.to_dict()["blocks"] == [2, 1]
