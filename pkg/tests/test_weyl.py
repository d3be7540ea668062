import numpy as np
import pytest

from bargmann_toeplitz.algebra import Definiteness
from bargmann_toeplitz.errors import HypothesisFailed, InputError
from bargmann_toeplitz.family import model_problem
from bargmann_toeplitz.forms import ComplexQuadraticPolynomial, PshWeight
from bargmann_toeplitz.oracle import QuadratureGrid, weyl_symbol_quadrature
from bargmann_toeplitz.symplectic import WeightPlane
from bargmann_toeplitz.weyl import (
    Conclusion,
    SymbolExponent,
    analyze,
    extension_bounded,
    holomorphic_extension,
    is_model_family,
    symbol_bounded,
    weyl_symbol,
)

from generators import cnormal, lambda_on_circle, random_Q, random_weight


class TestWeylSymbol:
    def test_normalization(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 3):
            phi0 = random_weight(rng, n)
            s = weyl_symbol(phi0, ComplexQuadraticPolynomial.zero(n))
            assert s.logC == 0
            assert s.P.max_abs_diff(ComplexQuadraticPolynomial.zero(n)) == 0

    def test_model_family(self):
        lam, c, d = -0.3 + 0.5j, 1 - 1j, 0.5j
        s = weyl_symbol(*model_problem(lam, c, d))
        k = 1 / (1 - lam)
        x = np.array([0.7 - 0.2j])
        want = k * (lam * abs(x[0]) ** 2 + 0.5 * np.conj(c) * x[0] - 0.5 * d * np.conj(x[0]))
        assert s.P(x) == pytest.approx(want, abs=1e-12)

    def test_against_quadrature(self):
        rng = np.random.default_rng(1)
        phi0 = random_weight(rng, 1)
        Q = random_Q(rng, phi0)
        s = weyl_symbol(phi0, Q)
        for x in cnormal(rng, 10, 1):
            r = weyl_symbol_quadrature(phi0, Q, x, QuadratureGrid(points_per_axis=24))
            assert abs(abs(r.value) / abs(s(x)) - 1) <= 1e-6

    def test_majorization_failure(self):
        phi0, Q = model_problem(0.3, 0, 0)
        with pytest.raises(HypothesisFailed) as exc:
            weyl_symbol(phi0, Q)
        assert exc.value.condition == "majorization"

    def test_inhomogeneous_weight_rejected(self):
        with pytest.raises((InputError, HypothesisFailed)):
            weyl_symbol(PshWeight.standard(1).with_constant(1.0), ComplexQuadraticPolynomial.zero(1))


class TestSymbolBounded:
    def test_inside_disc(self):
        assert symbol_bounded(weyl_symbol(*model_problem(-0.5, 1, 2))).status == "yes"

    def test_circle_matched(self):
        lam = lambda_on_circle(np.random.default_rng(2))
        d = 0.7 - 0.1j
        c = d / (1 - 2 * lam)
        assert symbol_bounded(weyl_symbol(*model_problem(lam, c, d))).status == "yes"

    def test_outside_disc(self):
        r = symbol_bounded(weyl_symbol(*model_problem(0.2, 0, 0)))
        assert r.status == "no" and r.witness is not None

    def test_circle_mismatched_has_linear_witness(self):
        s = weyl_symbol(*model_problem(0, 1, 0))
        r = symbol_bounded(s)
        assert r.status == "no"
        t = np.array([10.0, 100.0])
        vals = [s.log_abs(ti * r.witness) for ti in t]
        assert vals[1] > vals[0]

    def test_marginal_band(self):
        # Re P of size 1e-9 relative to |P|
        P = ComplexQuadraticPolynomial.from_parts(1, B=(2e-9 + 1j) * np.eye(1))
        assert symbol_bounded(SymbolExponent(P)).status == "marginal"


class TestHolomorphicExtension:
    def test_modulus_squared(self):
        # on Lambda for |x|^2/4, conj x = 2 i xi, so |x|^2 = i (2 x xi)
        phi0 = PshWeight.standard(1)
        hs = holomorphic_extension(SymbolExponent(ComplexQuadraticPolynomial.from_parts(1, B=np.eye(1))), phi0)
        assert np.allclose(hs.F.Theta, [[0, 2], [2, 0]])
        assert np.allclose(hs.l.vector, 0) and hs.restriction_residual <= 1e-12

    def test_zero(self):
        hs = holomorphic_extension(SymbolExponent(ComplexQuadraticPolynomial.zero(2)), PshWeight.standard(2))
        assert not hs.F.Theta.any() and not hs.l.vector.any()

    def test_random_restriction(self):
        rng = np.random.default_rng(3)
        for n in (1, 2, 3):
            phi0 = random_weight(rng, n, inhomogeneous=True)
            X = cnormal(rng, n, n)
            P = ComplexQuadraticPolynomial(X + X.T, cnormal(rng, n, n), np.zeros((n, n)), cnormal(rng, n), cnormal(rng, n), 0.3)
            hs = holomorphic_extension(SymbolExponent(P, 0.1j), phi0)
            assert hs.restriction_residual <= 1e-10
            x = cnormal(rng, 4, n)
            rho = WeightPlane(phi0).point(x)
            assert np.allclose(hs.log_value(rho), 0.1j + P(x))

    def test_two_boundedness_routes_agree(self):
        rng = np.random.default_rng(4)
        for k in range(40):
            n = 1 + k % 2
            phi0 = random_weight(rng, n)
            Q = random_Q(rng, phi0, shift=rng.uniform(0, 3))
            s = weyl_symbol(phi0, Q)
            assert symbol_bounded(s).status == extension_bounded(holomorphic_extension(s, phi0), phi0).status


class TestAnalyze:
    def test_gamma_half(self):
        v = analyze(*model_problem(-0.5, 0, 0))
        assert v.conclusion is Conclusion.BOUNDED and v.operator_status == "Bounded"
        assert v.certificate.bounded

    def test_circle_mismatch(self):
        v = analyze(*model_problem(0, 1, 0))
        assert v.conclusion is Conclusion.SYMBOL_UNBOUNDED and v.operator_status == "Unbounded"

    def test_general_unbounded_is_unknown(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            phi0 = random_weight(rng, 2)
            v = analyze(phi0, random_Q(rng, phi0))
            if v.conclusion is Conclusion.SYMBOL_UNBOUNDED:
                assert "unknown" in v.operator_status
                return
        pytest.fail("no unbounded instance sampled")

    def test_q_zero(self):
        phi0 = random_weight(np.random.default_rng(6), 2)
        v = analyze(phi0, ComplexQuadraticPolynomial.zero(2))
        assert v.conclusion is Conclusion.BOUNDED
        assert v.psi.max_abs_diff(phi0, include_constant=False) <= 1e-12
        assert v.phi.max_abs_diff(phi0, include_constant=False) <= 1e-12

    def test_hypothesis_failed(self):
        v = analyze(*model_problem(0.3, 0, 0))
        assert v.conclusion is Conclusion.HYPOTHESIS_FAILED and not v.majorization.holds

    def test_majorization_implies_nondegeneracy(self):
        # H - Herm(B_q) > 0 makes 2H - B_q have a positive definite Hermitian part
        rng = np.random.default_rng(9)
        for k in range(50):
            n = 1 + k % 3
            phi0 = random_weight(rng, n)
            v = analyze(phi0, random_Q(rng, phi0, ratio=0.999))
            assert v.majorization.holds and v.nondegeneracy.holds

    def test_bounded_implies_phi_below_phi0(self):
        rng = np.random.default_rng(7)
        seen = 0
        for k in range(40):
            n = 1 + k % 2
            phi0 = random_weight(rng, n)
            v = analyze(phi0, random_Q(rng, phi0, shift=2.0))
            if v.conclusion is Conclusion.BOUNDED:
                seen += 1
                assert v.phi_below_phi0 in (Definiteness.POS_DEF, Definiteness.POS_SEMI_DEF, Definiteness.ZERO)
                assert v.route_residual <= 1e-7
        assert seen > 5

    def test_model_detection(self):
        assert is_model_family(*model_problem(0.1, [1, 2], [0, 1]))
        phi0 = random_weight(np.random.default_rng(8), 1)
        assert not is_model_family(phi0, ComplexQuadraticPolynomial.zero(1))

    def test_rejects_inhomogeneous(self):
        with pytest.raises(InputError):
            analyze(PshWeight.standard(1).with_constant(1.0), ComplexQuadraticPolynomial.zero(1))

    def test_tolerances_recorded(self):
        v = analyze(*model_problem(-0.5, 0, 0), tol=1e-8, band=1e-7)
        assert v.tolerances == {"tol_psd": 1e-8, "marginal_band": 1e-7}
