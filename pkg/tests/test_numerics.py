import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conjugate_reversibility.exceptions import InvalidInputError, NotSpecialLinearError
from conjugate_reversibility.families import random_conjugator, random_special_linear
from conjugate_reversibility.numerics import (
    BinomialIdentity,
    Polynomial,
    RootCluster,
    as_complex_matrix,
    binomial_identity_check,
    c_dual,
    char_poly,
    is_c_reciprocal,
    numeric_rank,
    perturbation_radius,
    poly_roots,
    require_special_linear,
    resultant,
    split_cluster,
    sylvester_condition,
    sylvester_matrix,
)


class TestMatrixValidation:
    def test_copies_into_complex(self):
        M = as_complex_matrix([[1, 2], [3, 4]])
        assert M.dtype == np.complex128
        assert M.shape == (2, 2)

    @pytest.mark.parametrize(
        "data",
        [[1, 2, 3], [[1, 2, 3], [4, 5, 6]], np.zeros((0, 0)), [[1, np.nan], [0, 1]], [[np.inf]]],
    )
    def test_rejects_malformed(self, data):
        with pytest.raises(InvalidInputError):
            as_complex_matrix(data)

    def test_special_linear(self):
        assert require_special_linear(np.diag([2.0, 0.5])) == pytest.approx(1.0)
        with pytest.raises(NotSpecialLinearError) as info:
            require_special_linear(np.diag([2.0, 1.0]))
        assert info.value.exit_code == 3
        assert info.value.det == pytest.approx(2.0)


class TestPolynomial:
    def test_from_roots_ascending(self):
        assert_allclose(Polynomial.from_roots([1, 2]).coeffs, [2, -3, 1])

    def test_degree_and_constant(self):
        p = Polynomial([3, 0, 1])
        assert p.degree == 2
        assert p.constant == 3
        assert p.is_monic

    def test_derivative(self):
        assert_allclose(Polynomial([1, 1, 1, 1]).derivative().coeffs, [1, 2, 3])
        assert_allclose(Polynomial([1, 1]).derivative(3).coeffs, [0])

    def test_monic(self):
        assert_allclose(Polynomial([2, 4]).monic().coeffs, [0.5, 1])
        with pytest.raises(InvalidInputError):
            Polynomial([1, 0]).monic()

    def test_evaluate(self):
        p = Polynomial([1, 0, 1])
        assert p(1j) == pytest.approx(0)
        assert p(2) == pytest.approx(5)

    def test_json_round_trip(self):
        p = Polynomial([1 + 2j, -3, 0.5j])
        assert Polynomial.from_json(p.to_json()).distance(p) == 0

    def test_rejects_empty_and_non_finite(self):
        with pytest.raises(InvalidInputError):
            Polynomial([])
        with pytest.raises(InvalidInputError):
            Polynomial([1, np.nan])


class TestCharPoly:
    def test_diagonal(self):
        assert_allclose(char_poly(np.diag([2.0, 0.5])).coeffs, [1, -2.5, 1])

    def test_matches_numpy(self, rng):
        A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert_allclose(char_poly(A).coeffs, np.poly(A)[::-1], rtol=1e-10, atol=1e-10)

    def test_cayley_hamilton(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        residual = char_poly(A).evaluate_matrix(A)
        assert np.linalg.norm(residual) <= 1e-9 * np.linalg.norm(A) ** 4

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_invariant_under_conjugation(self, n, rng):
        for _ in range(10):
            A = random_special_linear(n, rng)
            K = random_conjugator(n, 3.0, rng)
            original = char_poly(A)
            moved = char_poly(K @ A @ np.linalg.inv(K))
            assert moved.distance(original) <= 1e-8 * max(1.0, float(np.max(np.abs(original.coeffs))))


class TestPolyRoots:
    def test_simple_roots_sorted(self):
        clusters = poly_roots(Polynomial.from_roots([0.5, 2.0, -1.0]))
        assert [c.multiplicity for c in clusters] == [1, 1, 1]
        assert_allclose([c.value for c in clusters], [2.0, -1.0, 0.5], atol=1e-12)

    def test_double_root_clusters(self):
        clusters = poly_roots(Polynomial.from_roots([1.0, 1.0, 2.0]))
        assert [c.multiplicity for c in clusters] == [1, 2]
        assert clusters[0].value == pytest.approx(2.0, abs=1e-12)
        assert clusters[1].value == pytest.approx(1.0, abs=1e-10)

    def test_unit_circle_roots(self):
        clusters = poly_roots(Polynomial([1, 0, 0, 0, 1]))
        assert len(clusters) == 4
        for c in clusters:
            assert abs(c.value) == pytest.approx(1.0, abs=1e-12)
            assert abs(c.value ** 4 + 1) <= 1e-12

    def test_non_monic_input(self):
        clusters = poly_roots(Polynomial([-6, 2]))
        assert clusters[0].value == pytest.approx(3.0)

    def test_degree_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            poly_roots(Polynomial([5]))

    def test_multiple_root_stays_apart_from_neighbour(self):
        lam, mu = np.exp(0.59j), np.exp(-1.47j)
        clusters = poly_roots(Polynomial.from_roots([lam] * 5 + [mu] * 2))
        by_multiplicity = {c.multiplicity: c.value for c in clusters}
        assert sorted(by_multiplicity) == [2, 5]
        assert abs(by_multiplicity[5] - lam) <= 1e-6
        assert abs(by_multiplicity[2] - mu) <= 1e-6

    def test_clusters_keep_member_roots(self):
        clusters = poly_roots(Polynomial.from_roots([1.0, 1.0, 1.0, 3.0]))
        for c in clusters:
            assert len(c.members) == c.multiplicity
            assert max(abs(z - c.value) for z in c.members) == pytest.approx(c.radius)

    def test_separated_simple_roots_do_not_merge(self):
        # gap 0.1, well above the noise radius of a double root
        clusters = poly_roots(Polynomial.from_roots([1.0, 1.1, -2.0]))
        assert [c.multiplicity for c in clusters] == [1, 1, 1]

    def test_perturbation_radius(self):
        coeffs = Polynomial.from_roots([1.0, 1.0, 1.0]).coeffs
        # (x - 1)^3 has third-order coefficient 1 and p~(1) = 8
        assert perturbation_radius(coeffs, 1.0, 3, 1e-9) == pytest.approx((8e-9) ** (1 / 3), rel=1e-3)
        assert perturbation_radius(coeffs, 1.0, 1, 1e-9) == math.inf

    def test_split_cluster_cuts_widest_gap(self):
        coeffs = Polynomial.from_roots([1.0, 1.0, 2.0]).coeffs
        merged = RootCluster(1.3, 3, 0.7, members=(1.0 + 1e-9, 1.0 - 1e-9, 2.0))
        parts = split_cluster(merged, coeffs, 1e-7)
        assert sorted(p.multiplicity for p in parts) == [1, 2]
        values = {p.multiplicity: p.value for p in parts}
        assert values[2] == pytest.approx(1.0, abs=1e-8)
        assert values[1] == pytest.approx(2.0, abs=1e-12)

    def test_split_needs_members(self):
        with pytest.raises(InvalidInputError):
            split_cluster(RootCluster(1.0, 2, 0.0), np.array([1.0, -2.0, 1.0]), 1e-7)

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(
            st.tuples(st.floats(0.5, 2.0), st.integers(0, 35).map(lambda k: 10 * k)),
            min_size=1,
            max_size=6,
            unique_by=lambda t: t[1],
        )
    )
    def test_recovers_separated_roots(self, polar):
        # degrees ten apart keep roots at least ~0.17 * 0.5 apart
        roots = [r * np.exp(1j * np.deg2rad(deg)) for r, deg in polar]
        clusters = poly_roots(Polynomial.from_roots(roots))
        assert sum(c.multiplicity for c in clusters) == len(roots)
        for z in roots:
            assert min(abs(c.value - z) for c in clusters) <= 1e-6


class TestResultant:
    def test_known_values(self):
        p = Polynomial([1, -1, 1])
        assert resultant(p, p.derivative()) == pytest.approx(3.0)
        assert resultant(Polynomial([1, 0, 1]), Polynomial([0, 2])) == pytest.approx(4.0)

    def test_diagonal_element(self):
        p = char_poly(np.diag([2.0, 0.5]))
        assert resultant(p, p.derivative()) == pytest.approx(-9 / 4)

    def test_sylvester_shape(self):
        assert sylvester_matrix(Polynomial([1, 0, 0, 1]), Polynomial([1, 1])).shape == (4, 4)

    def test_degree_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            resultant(Polynomial([1]), Polynomial([0, 1]))

    def test_condition_flags_common_roots(self):
        separated = Polynomial.from_roots([2.0, 0.5])
        repeated = Polynomial.from_roots([1.0, 1.0])
        assert sylvester_condition(separated, separated.derivative()) < 1e3
        assert sylvester_condition(repeated, repeated.derivative()) > 1e12


class TestCDual:
    def test_roots_map_to_conj_inverse(self):
        dual = c_dual(Polynomial.from_roots([2.0, 1j]))
        assert dual.distance(Polynomial.from_roots([0.5, 1j])) <= 1e-12

    def test_zero_constant_rejected(self):
        with pytest.raises(InvalidInputError):
            c_dual(Polynomial([0, 1]))

    def test_reciprocity(self):
        assert is_c_reciprocal(Polynomial.from_roots([2.0, 0.5]))
        assert is_c_reciprocal(Polynomial.from_roots([1j, -1j, np.exp(0.3j)]))
        assert not is_c_reciprocal(Polynomial.from_roots([2.0, 3.0]))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.tuples(st.floats(0.5, 2.0), st.floats(-3.1, 3.1)), min_size=1, max_size=5))
    def test_dual_is_an_involution(self, polar):
        p = Polynomial.from_roots([r * np.exp(1j * t) for r, t in polar])
        assert c_dual(c_dual(p)).distance(p) <= 1e-9 * np.max(np.abs(p.coeffs))


class TestBinomialIdentities:
    @given(st.integers(2, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1))))
    def test_alternating_tail_vanishes(self, args):
        n, r = args
        assert binomial_identity_check(BinomialIdentity.ALTERNATING_TAIL, n, r) == 0

    @given(st.integers(1, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1))))
    def test_weighted_alternating_vanishes(self, args):
        n, k = args
        assert binomial_identity_check("weighted-alternating", n, k) == 0

    def test_short_names(self):
        assert BinomialIdentity.BL1 is BinomialIdentity.ALTERNATING_TAIL
        assert BinomialIdentity("BL2") is BinomialIdentity.WEIGHTED_ALTERNATING
        assert BinomialIdentity("bl1") is BinomialIdentity.ALTERNATING_TAIL
        assert binomial_identity_check("BL1", 5, 3) == 0
        assert binomial_identity_check(BinomialIdentity.BL2, 3, 1) == 0
        with pytest.raises(ValueError):
            BinomialIdentity("BL3")

    @pytest.mark.parametrize(
        "kind,n,r",
        [("alternating-tail", 4, 4), ("alternating-tail", 1, 0), ("weighted-alternating", 3, -1)],
    )
    def test_out_of_range(self, kind, n, r):
        with pytest.raises(InvalidInputError):
            binomial_identity_check(kind, n, r)


def test_numeric_rank():
    assert numeric_rank(np.diag([1.0, 1e-12])) == 1
    assert numeric_rank(np.diag([1.0, 1e-6])) == 2
    assert numeric_rank(np.diag([1e-6, 1e-6]), scale=1e6) == 0
