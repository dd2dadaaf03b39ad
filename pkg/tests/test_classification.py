import numpy as np
import pytest

from conjugate_reversibility.classification import (
    TENSION_WARNING,
    DynamicalType,
    ResultantClass,
    ResultantSign,
    classify,
    classify_type,
    eigenvalue_product_resultant,
    evaluate_resultant,
    loxodromy_profile,
    polar_resultant_sign,
    polynomial_criterion,
    power_trace_bounded,
    resultant_classify,
    sl4_classify,
    sl4_coefficients,
    trace_bounded,
)
from conjugate_reversibility.exceptions import InvalidInputError, TheoremPreconditionError
from conjugate_reversibility.families import (
    SL4_FAMILIES,
    a1,
    a2,
    a3_pm1,
    a3_pmi,
    conjugate,
    random_special_linear,
    regular_c_reciprocal_spectrum,
    sl4_sample,
    tension_matrix,
)
from conjugate_reversibility.numerics import Polynomial, char_poly, resultant
from conjugate_reversibility.reversibility import pairing_check
from conjugate_reversibility.spectral import eigen_structure

ROTATION = np.diag(np.exp([0.9j, -0.9j]))
PARABOLIC = np.array([[1.0, 1.0], [0.0, 1.0]])
LOXODROMIC = np.diag([2.0, 0.5])


class TestDynamicalType:
    @pytest.mark.parametrize(
        "A,expected",
        [
            (ROTATION, DynamicalType.ELLIPTIC),
            (PARABOLIC, DynamicalType.PARABOLIC),
            (LOXODROMIC, DynamicalType.LOXODROMIC),
        ],
    )
    def test_two_by_two(self, A, expected):
        assert classify_type(eigen_structure(A)) is expected

    def test_loxoparabolic(self, rng):
        assert classify_type(eigen_structure(a1(rng, r=2.0))) is DynamicalType.LOXOPARABOLIC


class TestLoxodromyProfile:
    def test_pair_and_units(self):
        A = np.diag([2.0, 0.5, np.exp(0.4j), np.exp(-0.4j)])
        profile = loxodromy_profile(eigen_structure(A))
        assert (profile.r, profile.s) == (1, 2)
        assert profile.regular and profile.complete
        assert profile.pairs[0][0] == pytest.approx(np.log(2.0))

    def test_incomplete_without_partner(self):
        profile = loxodromy_profile(eigen_structure(np.diag([2.0, 0.5j, -1j])))
        assert not profile.complete


class TestTraceBounds:
    def test_spectral_bound(self):
        assert trace_bounded(eigen_structure(ROTATION))
        assert trace_bounded(eigen_structure(PARABOLIC))
        assert not trace_bounded(eigen_structure(LOXODROMIC))

    def test_power_traces(self):
        assert power_trace_bounded(ROTATION)
        assert not power_trace_bounded(LOXODROMIC)


def _separated_c_reciprocal_spectrum(rng, r, s, gap=0.1):
    """r loxodromic pairs with modulus in [1.1, 3] and s unit roots, pairwise at least ``gap`` apart."""
    while True:
        lam = rng.uniform(1.1, 3.0, r) * np.exp(1j * rng.uniform(0, 2 * np.pi, r))
        units = np.exp(1j * rng.uniform(0, 2 * np.pi, s))
        roots = np.concatenate([lam, 1 / np.conj(lam), units])
        distances = np.abs(roots[:, None] - roots[None, :]) + np.eye(roots.size)
        if distances.min() >= gap:
            return roots


def _separated_roots(rng, n, gap=0.2):
    while True:
        roots = rng.uniform(0.5, 2.0, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        if np.min(np.abs(roots[:, None] - roots[None, :]) + np.eye(n)) >= gap:
            return roots


class TestResultant:
    def test_diagonal_value(self):
        evaluation = evaluate_resultant(char_poly(LOXODROMIC))
        assert evaluation.value == pytest.approx(-9 / 4)
        assert evaluation.sign is ResultantSign.NEGATIVE

    def test_degree_one(self):
        evaluation = evaluate_resultant(Polynomial([-1, 1]))
        assert evaluation.value == 1
        assert evaluation.sign is ResultantSign.POSITIVE

    def test_repeated_root_is_zero(self):
        assert evaluate_resultant(char_poly(PARABOLIC)).sign is ResultantSign.ZERO

    @pytest.mark.parametrize("r,s", [(1, 6), (2, 4), (3, 2), (4, 0), (2, 3), (3, 1), (1, 5)])
    def test_large_regular_spectra_are_regular(self, r, s, rng):
        # moduli up to 3 push the Sylvester condition past 1 / res_tol
        for _ in range(30):
            roots = _separated_c_reciprocal_spectrum(rng, r, s)
            evaluation = evaluate_resultant(Polynomial.from_roots(roots))
            expected = ResultantSign.POSITIVE if r % 2 == 0 else ResultantSign.NEGATIVE
            assert evaluation.sign is expected, (roots, evaluation)

    def test_ill_conditioned_repeated_root_is_zero(self):
        p = Polynomial.from_roots([2.9, 2.9, 1 / 2.9, 1 / 2.9, 1j, -1j, 2.5j, 0.4j])
        evaluation = evaluate_resultant(p)
        assert evaluation.sign is ResultantSign.ZERO

    def test_classes(self):
        assert resultant_classify(LOXODROMIC) is ResultantClass.REGULAR_ODD_LOXODROMIC
        assert resultant_classify(ROTATION) is ResultantClass.REGULAR_EVEN_LOXODROMIC
        assert resultant_classify(np.eye(3)) is ResultantClass.NOT_REGULAR

    def test_requires_c_reciprocal(self, rng):
        with pytest.raises(TheoremPreconditionError):
            resultant_classify(random_special_linear(3, rng))

    def test_product_expansion(self):
        assert eigenvalue_product_resultant([2.0, 0.5]) == pytest.approx(-9 / 4)
        assert eigenvalue_product_resultant([1.0, 1.0]) == 0

    def test_sylvester_matches_product_formula(self, rng):
        for n in range(2, 7):
            for _ in range(10):
                roots = _separated_roots(rng, n)
                p = Polynomial.from_roots(roots)
                expected = eigenvalue_product_resultant(roots)
                assert abs(resultant(p, p.derivative()) - expected) <= 1e-6 * abs(expected)

    @pytest.mark.slow
    def test_parity_ensemble(self, rng):
        for _ in range(500):
            n = int(rng.integers(2, 9))
            r = int(rng.integers(0, n // 2 + 1))
            roots = regular_c_reciprocal_spectrum(r, n - 2 * r, rng)
            A = conjugate(np.diag(roots), rng, cond=3.0)
            expected = ResultantClass.REGULAR_ODD_LOXODROMIC
            if r % 2 == 0:
                expected = ResultantClass.REGULAR_EVEN_LOXODROMIC
            assert resultant_classify(A) is expected

    @pytest.mark.parametrize("r,s", [(0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (1, 4)])
    def test_parity_on_regular_spectra(self, r, s, rng):
        roots = regular_c_reciprocal_spectrum(r, s, rng)
        A = conjugate(np.diag(roots), rng, cond=3.0)
        expected = (
            ResultantClass.REGULAR_EVEN_LOXODROMIC if r % 2 == 0 else ResultantClass.REGULAR_ODD_LOXODROMIC
        )
        assert resultant_classify(A) is expected

        S = eigen_structure(A)
        profile = loxodromy_profile(S)
        assert (profile.r, profile.s) == (r, s)
        sign = evaluate_resultant(char_poly(A)).sign
        assert polar_resultant_sign(profile) is sign
        product = eigenvalue_product_resultant(roots)
        assert (product.real > 0) == (sign is ResultantSign.POSITIVE)


class TestPolynomialCriterion:
    def test_reversible_element(self):
        assert polynomial_criterion(LOXODROMIC, eigen_structure(LOXODROMIC))

    def test_generic_element(self, rng):
        A = random_special_linear(3, rng)
        assert not polynomial_criterion(A, eigen_structure(A))

    def test_tension_is_reported(self):
        A = tension_matrix(2.0)
        report = classify(A)
        assert report.polynomial_criterion
        assert not report.pairing_verdict
        assert TENSION_WARNING in report.warnings


class TestSL4:
    def test_coefficients(self):
        c1, c2, c3 = sl4_coefficients(Polynomial.from_roots([2.0, 0.5, 1.0, 1.0]))
        assert c3 == pytest.approx(4.5)
        assert c2 == pytest.approx(7.0)
        assert c1 == pytest.approx(4.5)

    def test_coefficients_need_degree_four(self):
        with pytest.raises(InvalidInputError):
            sl4_coefficients(Polynomial.from_roots([1.0, 1.0]))

    def test_needs_four_by_four(self):
        with pytest.raises(InvalidInputError):
            sl4_classify(np.eye(3))

    def test_real_trace_equality_is_not_reversible(self, rng):
        decision = sl4_classify(a1(rng, r=2.0))
        assert not decision.verdict
        assert decision.branch == "real-trace"
        assert decision.coefficients[2] == pytest.approx(5.0)
        assert decision.coefficients[1] == pytest.approx(33 / 4)
        assert decision.path == (
            "c-reciprocal-check: pass",
            "trace-bounded: no",
            "minpoly-degree: 3",
            "trace-component: real",
            "c2-condition: equal",
        )
        assert decision.consistent

    def test_imaginary_trace_equality_is_not_reversible(self, rng):
        decision = sl4_classify(a2(rng, r=2.0))
        assert not decision.verdict
        assert decision.branch == "imaginary-trace"
        assert decision.coefficients[2] == pytest.approx(5j)
        assert decision.coefficients[1] == pytest.approx(-33 / 4)

    def test_real_trace_inequality(self, rng):
        decision = sl4_classify(a3_pm1(rng, sign=1.0, r=2.0))
        assert decision.verdict
        assert decision.coefficients[1] == pytest.approx(7.0)
        assert decision.path[-1] == "c2-condition: differs"

    def test_imaginary_trace_inequality(self, rng):
        decision = sl4_classify(a3_pmi(rng, sign=1.0, r=2.0))
        assert decision.verdict
        assert decision.coefficients[1] == pytest.approx(-7.0)

    @pytest.mark.parametrize("name", sorted(SL4_FAMILIES))
    def test_families_reach_their_branch(self, name, rng):
        for _ in range(3):
            A, family = sl4_sample(name, rng)
            decision = sl4_classify(A)
            assert decision.verdict is family.verdict
            assert decision.branch == family.branch
            assert decision.consistent
            assert pairing_check(eigen_structure(A)).verdict is family.verdict

    @pytest.mark.parametrize("r", [1.5, 2.0, 3.0])
    def test_unit_pair_coefficient_relations(self, r, rng):
        def coefficients(D):
            return sl4_coefficients(char_poly(conjugate(D, rng, cond=5.0)))

        _, c2, c3 = coefficients(a3_pm1(rng, sign=-1.0, r=r))
        assert c2 == pytest.approx(-2 * c3 - 2, abs=1e-8)
        _, c2, c3 = coefficients(a3_pmi(rng, sign=1.0, r=r))
        assert c2 == pytest.approx(2j * c3 + 2, abs=1e-8)
        _, c2, c3 = coefficients(a3_pmi(rng, sign=-1.0, r=r))
        assert c2 == pytest.approx(-2j * c3 + 2, abs=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", sorted(SL4_FAMILIES))
    def test_family_ensembles(self, name, rng):
        for _ in range(100):
            A, family = sl4_sample(name, rng)
            decision = sl4_classify(A)
            assert (decision.verdict, decision.branch) == (family.verdict, family.branch)
            assert decision.consistent


class TestClassify:
    def test_report(self):
        report = classify(LOXODROMIC)
        assert report.dynamical_type is DynamicalType.LOXODROMIC
        assert report.profile.r == 1
        assert report.resultant_sign is ResultantSign.NEGATIVE
        assert report.resultant_class is ResultantClass.REGULAR_ODD_LOXODROMIC
        assert report.pairing_verdict and report.polynomial_criterion
        assert report.sl4 is None
        assert report.warnings == ()

    def test_sl4_attached(self, rng):
        report = classify(a3_pm1(rng, sign=-1.0, r=2.0))
        assert report.sl4 is not None
        assert report.sl4.verdict

    def test_precondition_warning(self, rng):
        report = classify(random_special_linear(3, rng))
        assert report.resultant_class is None
        assert any("resultant class unavailable" in w for w in report.warnings)

    def test_to_dict(self):
        data = classify(LOXODROMIC).to_dict()
        assert data["dynamical_type"] == "loxodromic"
        assert data["resultant_value"] == [pytest.approx(-2.25), pytest.approx(0.0)]
