import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bargmann_toeplitz.algebra import Definiteness, psd_classify
from bargmann_toeplitz.errors import PositivityViolation, SpectralObstruction
from bargmann_toeplitz.forms import PshWeight
from bargmann_toeplitz.symplectic import (
    AffineCanonicalMap,
    ComplexLinearForm,
    HolomorphicQuadratic,
    WeightPlane,
    fundamental_matrix,
    hamilton_vector,
    image_plane,
    intersection_locus,
    kappa_F,
    kappa_ell,
    kappa_full,
    spectral_report,
    symplectic_J,
    symplectic_pair,
    translate_plane,
    translation_form,
)

from generators import cnormal, random_F, random_F_psd_on_plane, random_l, random_weight

seeds = st.integers(0, 2**32 - 1)


class TestPairing:
    def test_canonical_pair(self):
        assert symplectic_pair([0, 1], [1, 0]) == 1

    @given(seeds)
    def test_antisymmetric(self, seed):
        rng = np.random.default_rng(seed)
        r, s = cnormal(rng, 4), cnormal(rng, 4)
        assert symplectic_pair(r, s) == pytest.approx(-symplectic_pair(s, r))
        assert symplectic_pair(r, r) == 0

    def test_matrix_form(self):
        rng = np.random.default_rng(0)
        r, s = cnormal(rng, 4), cnormal(rng, 4)
        assert r @ symplectic_J(2) @ s == pytest.approx(symplectic_pair(r, s))


class TestFundamentalMatrix:
    def test_x_xi(self):
        F = HolomorphicQuadratic([[0, 1], [1, 0]])  # F = x xi
        assert np.allclose(fundamental_matrix(F), [[1, 0], [0, -1]])

    def test_zero(self):
        assert not fundamental_matrix(HolomorphicQuadratic(np.zeros((4, 4)))).any()

    def test_hamilton_field(self):
        rng = np.random.default_rng(1)
        F = random_F(rng, 2)
        rho = cnormal(rng, 4)
        g = F.gradient(rho)
        assert np.allclose(fundamental_matrix(F) @ rho, np.concatenate([g[2:], -g[:2]]))

    def test_sigma_self_adjoint(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            F = random_F(rng, 2)
            Fm = fundamental_matrix(F)
            E = np.eye(4)
            for i in range(4):
                for j in range(4):
                    assert symplectic_pair(Fm @ E[i], E[j]) == pytest.approx(symplectic_pair(Fm @ E[j], E[i]))


class TestHamiltonVector:
    def test_xi(self):
        assert np.allclose(hamilton_vector(ComplexLinearForm([0], [1])), [1, 0])

    def test_x(self):
        assert np.allclose(hamilton_vector(ComplexLinearForm([1], [0])), [0, -1])

    def test_linear(self):
        rng = np.random.default_rng(3)
        l1, l2 = random_l(rng, 2), random_l(rng, 2)
        assert np.allclose(hamilton_vector(l1 + l2.scaled(2j)), hamilton_vector(l1) + 2j * hamilton_vector(l2))


class TestCanonicalMaps:
    def test_kappa_zero_is_identity(self):
        assert kappa_F(HolomorphicQuadratic(np.zeros((2, 2)))).max_abs_diff(AffineCanonicalMap.identity(1)) == 0

    def test_obstruction(self):
        # F = x xi gives eigenvalues +-1; scaling by 2 puts them at +-2
        F = HolomorphicQuadratic([[0, 2], [2, 0]])
        assert not spectral_report(F).admissible
        with pytest.raises(SpectralObstruction) as exc:
            kappa_F(F)
        assert abs(abs(exc.value.eigenvalue) - 2) < 1e-12

    def test_symplectic(self):
        rng = np.random.default_rng(4)
        for n in (1, 2, 3):
            assert kappa_F(random_F(rng, n)).symplectic_residual() <= 1e-12

    def test_full_with_zero_l(self):
        F = random_F(np.random.default_rng(5), 2)
        assert kappa_full(F, ComplexLinearForm.zero(2)).max_abs_diff(kappa_F(F)) == 0

    def test_full_with_zero_F(self):
        l = random_l(np.random.default_rng(6), 2)
        F0 = HolomorphicQuadratic(np.zeros((4, 4)))
        k = kappa_full(F0, l)
        assert np.allclose(k.M, np.eye(4)) and np.allclose(k.t, -hamilton_vector(l))
        assert np.allclose(kappa_ell(F0, l).t, -hamilton_vector(l))

    def test_ell_with_zero_l(self):
        F = random_F(np.random.default_rng(7), 2)
        assert kappa_ell(F, ComplexLinearForm.zero(2)).max_abs_diff(AffineCanonicalMap.identity(2)) == 0

    def test_jacobi_identity(self):
        rng = np.random.default_rng(8)
        F, l = random_F(rng, 2), random_l(rng, 2)
        kF = kappa_F(F)
        Hl = hamilton_vector(l)
        lhs = kF.M @ Hl + Hl
        rhs = -2 * hamilton_vector(translation_form(F, l))
        assert np.abs(lhs - rhs).max() <= 1e-12

    def test_pullback(self):
        rng = np.random.default_rng(9)
        l = random_l(rng, 2)
        k = AffineCanonicalMap(kappa_F(random_F(rng, 2)).M, cnormal(rng, 4))
        rho = cnormal(rng, 4)
        assert l.pullback(k)(rho) == pytest.approx(l(k(rho)))

    def test_compose_and_inverse(self):
        rng = np.random.default_rng(10)
        k = AffineCanonicalMap(kappa_F(random_F(rng, 2)).M, cnormal(rng, 4))
        assert k.compose(k.inverse()).max_abs_diff(AffineCanonicalMap.identity(2)) <= 1e-12


class TestWeightPlane:
    @given(seeds)
    def test_i_lagrangian(self, seed):
        phi = random_weight(np.random.default_rng(seed), 2, inhomogeneous=True)
        assert WeightPlane(phi).lagrangian_residual() <= 1e-12

    def test_r_symplectic(self):
        phi = random_weight(np.random.default_rng(11), 2)
        S = WeightPlane(phi).real_symplectic_form()
        assert abs(np.linalg.det(S)) > 1e-6

    def test_parametrization(self):
        rng = np.random.default_rng(12)
        plane = WeightPlane(random_weight(rng, 2, inhomogeneous=True))
        G, g0 = plane.parametrization()
        x = cnormal(rng, 2)
        r = np.concatenate([x.real, x.imag])
        assert np.allclose(G @ r + g0, plane.point(x))
        assert plane.residual(plane.point(x)) <= 1e-12


class TestImagePlane:
    def test_identity(self):
        phi = random_weight(np.random.default_rng(13), 2, inhomogeneous=True)
        out = image_plane(AffineCanonicalMap.identity(2), WeightPlane(phi)).phi
        assert out.max_abs_diff(phi, include_constant=False) <= 1e-12

    def test_points_map_onto_image(self):
        rng = np.random.default_rng(14)
        phi0 = random_weight(rng, 2)
        k = AffineCanonicalMap(kappa_F(random_F(rng, 2, s=0.3)).M, cnormal(rng, 4))
        img = image_plane(k, WeightPlane(phi0))
        rho = k(WeightPlane(phi0).point(cnormal(rng, 5, 2)))
        assert img.residual(rho).max() <= 1e-10

    def test_model_family_phi_below_phi0(self):
        from bargmann_toeplitz.family import model_problem
        from bargmann_toeplitz.weyl import holomorphic_extension, weyl_symbol

        phi0, Q = model_problem(-0.5, 1.0, 0.3)
        hs = holomorphic_extension(weyl_symbol(phi0, Q), phi0)
        phi = image_plane(kappa_F(hs.F), WeightPlane(phi0)).phi
        # gamma = 1/2: Phi = |gamma|^2 |x|^2 / 4
        assert np.allclose(phi.H, 0.25 * 0.25 * np.eye(1))
        assert psd_classify((phi0 - phi).real_form().M) is Definiteness.POS_DEF


class TestTranslatePlane:
    def test_zero(self):
        phi = random_weight(np.random.default_rng(15), 2, inhomogeneous=True)
        assert translate_plane(phi, ComplexLinearForm.zero(2)).max_abs_diff(phi) == 0

    def test_model_xi(self):
        # Phi = |x|^2/4, m = xi: the plane moves by H_m = (1, 0), i.e. x -> x + 1
        psi = translate_plane(PshWeight.standard(1), ComplexLinearForm([0], [1]))
        x = np.array([0.3 - 0.7j, 2.0 + 1j, -1.5j])
        want = np.abs(x) ** 2 / 4 - 0.5 * x.real
        got = np.array([psi([v]) for v in x])
        assert np.allclose(got - want, got[0] - want[0])
        # with the flow constant it is exactly Phi(x - 1)
        assert np.allclose(got, np.abs(x - 1) ** 2 / 4)

    def test_against_image_of_translation(self):
        rng = np.random.default_rng(16)
        for n in (1, 2, 3):
            phi = random_weight(rng, n, inhomogeneous=True)
            m = random_l(rng, n)
            a = translate_plane(phi, m)
            b = image_plane(AffineCanonicalMap.translation(hamilton_vector(m)), WeightPlane(phi)).phi
            assert a.max_abs_diff(b, include_constant=False) <= 1e-10


class TestIntersectionLocus:
    def test_positive_definite_gives_zero(self):
        rng = np.random.default_rng(17)
        phi0 = random_weight(rng, 2)
        L = intersection_locus(random_F_psd_on_plane(rng, phi0, 4), phi0)
        assert L.dim == 0

    def test_F_zero_gives_whole_plane(self):
        phi0 = random_weight(np.random.default_rng(18), 2)
        L = intersection_locus(HolomorphicQuadratic(np.zeros((4, 4))), phi0)
        assert L.dim == 4 and L.x_basis.shape[1] == 4

    def test_membership(self):
        rng = np.random.default_rng(19)
        phi0 = random_weight(rng, 2)
        F = random_F_psd_on_plane(rng, phi0, 2)
        L = intersection_locus(F, phi0)
        phi = image_plane(kappa_F(F), WeightPlane(phi0)).phi
        assert L.dim == 2
        assert WeightPlane(phi0).residual(L.basis.T).max() <= 1e-10
        assert WeightPlane(phi).residual(L.basis.T).max() <= 1e-10

    def test_positive_on_complement(self):
        rng = np.random.default_rng(20)
        phi0 = random_weight(rng, 2)
        F = random_F_psd_on_plane(rng, phi0, 1)
        L = intersection_locus(F, phi0)
        phi = image_plane(kappa_F(F), WeightPlane(phi0)).phi
        x = cnormal(rng, 50, 2)
        diff = np.array([phi0(v) - phi(v) for v in x])
        assert np.all(diff > 0) and np.all(L.x_distance_sq(x) > 0)

    def test_violation(self):
        rng = np.random.default_rng(21)
        phi0 = random_weight(rng, 1)
        F = random_F_psd_on_plane(rng, phi0, 2)
        with pytest.raises(PositivityViolation):
            intersection_locus(HolomorphicQuadratic(-F.Theta), phi0)
