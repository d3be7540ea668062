import numpy as np
import pytest

from bargmann_toeplitz.errors import HypothesisFailed, InputError
from bargmann_toeplitz.family import (
    ExampleClass,
    classify_example,
    coherent_state,
    gamma,
    log_norm_growth_rate,
    metaplectic_identities_check,
    model_problem,
    model_symbol,
    toeplitz_on_kernel,
)
from bargmann_toeplitz.weyl import weyl_symbol

from generators import cnormal, lambda_on_circle, random_lambda


class TestGamma:
    @pytest.mark.parametrize("lam,want", [(0, 1), (-0.5, 0.5), (0.25, 2), (0.5j, 0.5 + 0.5j)])
    def test_values(self, lam, want):
        assert gamma(lam) == pytest.approx(want)

    def test_pole(self):
        with pytest.raises(ZeroDivisionError):
            gamma(0.5)

    def test_circle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert abs(gamma(lambda_on_circle(rng))) == pytest.approx(1, abs=1e-12)


class TestClassify:
    def test_inside(self):
        assert classify_example(-0.5, 1, 2).verdict is ExampleClass.BOUNDED

    def test_outside(self):
        assert classify_example(0.2, 0, 0).verdict is ExampleClass.UNBOUNDED

    def test_circle_matched_and_not(self):
        lam = (1 - np.exp(0.8j)) / 2
        g = gamma(lam)
        assert classify_example(lam, g * 0.7, 0.7).verdict is ExampleClass.BOUNDED
        r = classify_example(lam, 1, 0.7)
        assert r.verdict is ExampleClass.UNBOUNDED and r.boundary

    def test_marginal(self):
        lam = 0.0
        assert classify_example(lam, [1 + 5e-9], [1]).verdict is ExampleClass.MARGINAL

    def test_c_zero_d_zero_on_circle(self):
        assert classify_example(0, 0, 0).verdict is ExampleClass.BOUNDED

    def test_rejects_large_real_part(self):
        with pytest.raises(HypothesisFailed):
            classify_example(0.25, 0, 0)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            classify_example(0, [1, 2], [1, 2, 3])


class TestCoherentState:
    def test_origin(self):
        k = coherent_state([0])
        assert k([1.0 + 2j]) == pytest.approx((2 * np.pi) ** -0.5)

    def test_exponent(self):
        w = np.array([1 - 2j, 0.5j])
        k = coherent_state(w)
        x = np.array([0.3 + 0.1j, -1.0])
        want = 0.5 * x @ w.conj() - 0.25 * np.vdot(w, w).real - np.log(2 * np.pi)
        assert k.log_value(x) == pytest.approx(want)


class TestToeplitzOnKernel:
    def test_identity_operator(self):
        rng = np.random.default_rng(1)
        for w in cnormal(rng, 5, 2):
            t = toeplitz_on_kernel(0, [0, 0], [0, 0], w)
            assert t.log_norm == pytest.approx(0, abs=1e-14)
            assert t.full_log_norm == pytest.approx(0, abs=1e-14)

    def test_image_is_scaled_kernel(self):
        # Top(e^q) k_w = gamma^n k at conj(gamma) w, up to the norm factor
        lam, w = -0.3 + 0.2j, np.array([0.4 - 1j])
        t = toeplitz_on_kernel(lam, [0], [0], w)
        g = gamma(lam)
        k = coherent_state(np.conj(g) * w)
        x = np.array([0.7 + 0.3j])
        shift = 0.25 * abs(g * w[0]) ** 2 - 0.25 * abs(w[0]) ** 2
        assert t.log_value(x) == pytest.approx(np.log(g) + k.log_value(x) + shift)

    def test_growth_rate(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            lam = random_lambda(rng)
            c, d = cnormal(rng, 1), cnormal(rng, 1)
            r = np.array([3.0, 6.0, 9.0])
            ln = [toeplitz_on_kernel(lam, c, d, t).log_norm for t in r]
            s = np.polyfit(r, ln, 2)[0]
            assert s == pytest.approx(log_norm_growth_rate(lam), abs=1e-9)

    def test_reduced_form_vanishes_when_matched(self):
        lam = lambda_on_circle(np.random.default_rng(3))
        d = np.array([0.4 + 0.9j])
        t = toeplitz_on_kernel(lam, gamma(lam) * d, d, np.array([2 - 1j]))
        assert t.reduced_log_norm == pytest.approx(0, abs=1e-12)

    def test_reduced_form_matches_log_norm_on_circle(self):
        lam = lambda_on_circle(np.random.default_rng(4))
        c, d = np.array([1.0 + 0.5j]), np.array([-0.3j])
        for w in (0.5, 2j, -1 + 3j):
            t = toeplitz_on_kernel(lam, c, d, w)
            assert t.log_norm - t.reduced_log_norm == pytest.approx(
                toeplitz_on_kernel(lam, c, d, 0).log_norm, abs=1e-12
            )

    def test_reduced_absent_off_circle(self):
        assert toeplitz_on_kernel(-0.5, 1, 1, 1).reduced_log_norm is None


class TestModelSymbol:
    def test_matches_general_engine(self):
        rng = np.random.default_rng(5)
        for k in range(20):
            n = 1 + k % 2
            lam = random_lambda(rng)
            c, d = cnormal(rng, n), cnormal(rng, n)
            closed = model_symbol(lam, c, d)
            eng = weyl_symbol(*model_problem(lam, c, d))
            assert closed.P.max_abs_diff(eng.P, include_constant=False) <= 1e-12


class TestMetaplecticIdentities:
    def test_gamma_half(self):
        r = metaplectic_identities_check(-0.5, [1.0])
        assert r.max_residual <= 1e-5
        assert r.metaplectic.fitted_constant == pytest.approx(r.metaplectic.expected_constant, rel=1e-5)

    def test_identity_symbol(self):
        r = metaplectic_identities_check(0.0, [0.5 - 0.5j])
        assert r.max_residual <= 1e-5

    def test_affine_antiholomorphic_factor(self):
        r = metaplectic_identities_check(-0.2 + 0.3j, [0.3j], h=(0.5, 1.0 - 1j))
        assert r.max_residual <= 1e-5
        assert r.antiholomorphic.fitted_constant == pytest.approx(r.antiholomorphic.expected_constant, rel=1e-5)

    def test_rejects_large_real_part(self):
        with pytest.raises(HypothesisFailed):
            metaplectic_identities_check(0.3, [1.0])
