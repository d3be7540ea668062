"""
Complex phase space C^{2n} = {(x, xi)}.

The symplectic form is ``sigma = sum d xi_j ^ d x_j`` evaluated as

    sigma(rho, rho') = xi.x' - xi'.x = rho.J rho',   J = [[0, -I], [I, 0]],

so that the Hamilton vector of ``f`` is ``H_f = (f'_xi, -f'_x)``.

Weight planes ``Lambda_Phi = {(x, (2/i) dPhi/dx(x))}`` are parametrized
real-linearly by ``r = (Re x, Im x)``: ``rho(r) = G r + g0``.
"""
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL, Definiteness, psd_classify, symmetrize
from .errors import (
    InputError,
    NotAGraph,
    NotLagrangianConsistent,
    PositivityViolation,
    SpectralObstruction,
)
from .forms import PshWeight


def symplectic_J(n):
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


def symplectic_pair(rho, rho2):
    """``sigma(rho, rho2) = xi.x2 - xi2.x`` (bilinear, no conjugation)."""
    rho = np.asarray(rho, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    n = rho.shape[-1] // 2
    return rho[..., n:] @ rho2[..., :n] - rho2[..., n:] @ rho[..., :n]


@dataclass(frozen=True, eq=False)
class HolomorphicQuadratic:
    """``F(rho) = 1/2 rho.Theta rho`` with ``Theta`` complex symmetric."""

    Theta: np.ndarray

    def __post_init__(self):
        T = symmetrize(np.asarray(self.Theta, dtype=complex), name="Theta")
        if T.shape[0] % 2:
            raise InputError("Theta must be 2n x 2n")
        object.__setattr__(self, "Theta", T)

    @property
    def n(self):
        return self.Theta.shape[0] // 2

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        return 0.5 * np.einsum("...i,ij,...j->...", rho, self.Theta, rho)

    def gradient(self, rho):
        return np.asarray(rho, dtype=complex) @ self.Theta


@dataclass(frozen=True, eq=False)
class ComplexLinearForm:
    """``l(x, xi) = lx.x + lxi.xi + const``."""

    lx: np.ndarray
    lxi: np.ndarray
    const: complex = 0.0

    def __post_init__(self):
        lx = np.asarray(self.lx, dtype=complex).reshape(-1)
        lxi = np.asarray(self.lxi, dtype=complex).reshape(-1)
        if lx.shape != lxi.shape:
            raise InputError("lx and lxi must have the same length")
        object.__setattr__(self, "lx", lx)
        object.__setattr__(self, "lxi", lxi)
        object.__setattr__(self, "const", complex(self.const))

    @classmethod
    def zero(cls, n):
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def from_vector(cls, c, const=0.0):
        c = np.asarray(c, dtype=complex)
        n = c.shape[0] // 2
        return cls(c[:n], c[n:], const)

    @property
    def n(self):
        return self.lx.shape[0]

    @property
    def vector(self):
        return np.concatenate([self.lx, self.lxi])

    def __call__(self, rho):
        return np.asarray(rho, dtype=complex) @ self.vector + self.const

    def __add__(self, other):
        return ComplexLinearForm(self.lx + other.lx, self.lxi + other.lxi, self.const + other.const)

    def scaled(self, t):
        return ComplexLinearForm(t * self.lx, t * self.lxi, t * self.const)

    def pullback(self, kappa):
        """The form ``l o kappa``."""
        return ComplexLinearForm.from_vector(kappa.M.T @ self.vector, self(kappa.t))


def fundamental_matrix(F):
    """Matrix of the Hamilton map ``rho -> H_F(rho)``.

    In blocks, ``[[F''_xi x, F''_xi xi], [-F''_xx, -F''_x xi]]``.
    """
    n = F.n
    T = F.Theta
    return np.block([[T[n:, :n], T[n:, n:]], [-T[:n, :n], -T[:n, n:]]])


def hamilton_vector(l):
    """``H_l = (l'_xi, -l'_x)``; constant because ``l`` is affine."""
    return np.concatenate([l.lxi, -l.lx])


@dataclass(frozen=True, eq=False)
class AffineCanonicalMap:
    """``rho -> M rho + t``."""

    M: np.ndarray
    t: np.ndarray = None

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=complex))
        t = np.zeros(M.shape[0], dtype=complex) if self.t is None else np.asarray(self.t, dtype=complex)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "t", t.reshape(-1))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(2 * n))

    @classmethod
    def translation(cls, v):
        v = np.asarray(v, dtype=complex)
        return cls(np.eye(v.shape[0]), v)

    @property
    def n(self):
        return self.M.shape[0] // 2

    def __call__(self, rho):
        return np.asarray(rho, dtype=complex) @ self.M.T + self.t

    def compose(self, inner):
        """``self o inner``."""
        return AffineCanonicalMap(self.M @ inner.M, self.M @ inner.t + self.t)

    def inverse(self):
        Mi = np.linalg.inv(self.M)
        return AffineCanonicalMap(Mi, -Mi @ self.t)

    def symplectic_residual(self):
        """``|M^T J M - J|_max``."""
        J = symplectic_J(self.n)
        return float(np.abs(self.M.T @ J @ self.M - J).max())

    def max_abs_diff(self, other):
        return max(float(np.abs(self.M - other.M).max()), float(np.abs(self.t - other.t).max()))


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray = field(repr=False)
    distance_to_pm2: float
    threshold: float
    admissible: bool
    offending: complex = None


def spectral_report(F, tol=DEFAULT_TOL):
    """Distance of ``Spec(fundamental_matrix(F))`` from ``{2, -2}``."""
    Fm = fundamental_matrix(F)
    ev = np.linalg.eigvals(Fm)
    d = np.minimum(np.abs(ev - 2), np.abs(ev + 2))
    k = int(np.argmin(d))
    thr = tol * np.linalg.norm(Fm, 2)
    ok = bool(d[k] > thr)
    return SpectralReport(ev, float(d[k]), float(thr), ok, None if ok else complex(ev[k]))


def kappa_F(F, tol=DEFAULT_TOL):
    """
    Linear canonical map ``(1 + Fm/2) rho -> (1 - Fm/2) rho``.

    Raises
    ------
    SpectralObstruction
        If the fundamental matrix ``Fm`` has an eigenvalue within
        ``tol * |Fm|`` of ``2`` or ``-2``.
    """
    rep = spectral_report(F, tol)
    if not rep.admissible:
        raise SpectralObstruction(
            f"fundamental matrix has eigenvalue {rep.offending:.6g} at +-2", rep.offending
        )
    Fm = fundamental_matrix(F)
    I = np.eye(Fm.shape[0])
    # (I - Fm/2)(I + Fm/2)^{-1}; the two factors commute
    M = np.linalg.solve((I + 0.5 * Fm).T, (I - 0.5 * Fm).T).T
    return AffineCanonicalMap(M)


def kappa_full(F, l, tol=DEFAULT_TOL):
    """Affine map ``rho -> kappa_F(rho) - kappa_F(H_l)/2 - H_l/2``."""
    kF = kappa_F(F, tol)
    Hl = hamilton_vector(l)
    return AffineCanonicalMap(kF.M, -0.5 * (kF.M @ Hl + Hl))


def translation_form(F, l, tol=DEFAULT_TOL):
    """``m = -(l o kappa_F^{-1} + l)/2`` (constant part dropped)."""
    kF = kappa_F(F, tol)
    lv = l.vector
    return ComplexLinearForm.from_vector(-0.5 * (np.linalg.solve(kF.M.T, lv) + lv))


def kappa_ell(F, l, tol=DEFAULT_TOL):
    """Phase-space translation ``rho -> rho - H_{l o kappa_F^{-1} + l}/2``."""
    m = translation_form(F, l, tol)
    return AffineCanonicalMap.translation(hamilton_vector(m))


@dataclass(frozen=True, eq=False)
class WeightPlane:
    """The real 2n-plane ``Lambda_Phi``."""

    phi: PshWeight

    @property
    def n(self):
        return self.phi.n

    def parametrization(self):
        """``(G, g0)`` with ``rho(r) = G r + g0`` for ``r = (Re x, Im x)``."""
        n = self.n
        I = np.eye(n)
        U = np.hstack([I, 1j * I])
        Ub = np.hstack([I, -1j * I])
        G = np.vstack([U, -2j * (self.phi.A @ U + self.phi.H.T @ Ub)])
        g0 = np.concatenate([np.zeros(n), -2j * self.phi.a])
        return G, g0

    def point(self, x):
        x = np.asarray(x, dtype=complex)
        return np.concatenate([x, self.phi.xi(x)], axis=-1)

    def residual(self, rho):
        """``|xi - xi_Phi(x)|`` for points ``rho = (x, xi)``."""
        rho = np.asarray(rho, dtype=complex)
        n = self.n
        return np.linalg.norm(rho[..., n:] - self.phi.xi(rho[..., :n]), axis=-1)

    def lagrangian_residual(self):
        """Largest ``|Im sigma|`` on pairs of basis vectors (should vanish)."""
        G, _ = self.parametrization()
        S = G.T @ symplectic_J(self.n) @ G
        return float(np.abs(S.imag).max())

    def real_symplectic_form(self):
        """``Re sigma`` on the plane, as a real 2n x 2n matrix."""
        G, _ = self.parametrization()
        return (G.T @ symplectic_J(self.n) @ G).real


def _real_stack(X):
    return np.vstack([X.real, X.imag])


def image_plane(kappa, plane, tol=DEFAULT_TOL):
    """
    Image of a weight plane under an affine canonical map.

    The image is recovered as ``Lambda_Psi`` for the weight ``Psi`` with
    ``xi = (2/i) dPsi/dx`` on it. ``Psi`` is determined up to an additive
    constant, which is set to zero.

    Raises
    ------
    NotAGraph
        If the image does not project bijectively onto the x-space.
    NotLagrangianConsistent
        If the recovered data fails ``A = A^T`` or ``H = H^*``.
    """
    n = plane.n
    G, g0 = plane.parametrization()
    MG = kappa.M @ G
    c0 = kappa.M @ g0 + kappa.t
    X, Xi = MG[:n], MG[n:]
    Rx = _real_stack(X)
    s = np.linalg.svd(Rx, compute_uv=False)
    if s[-1] <= tol * s[0]:
        raise NotAGraph(f"x-projection of the image is singular (cond {s[0] / max(s[-1], 1e-300):.3g})")
    K = np.linalg.solve(Rx.T, Xi.T).T
    r0 = np.concatenate([c0[:n].real, c0[:n].imag])
    k0 = c0[n:] - K @ r0
    Ku, Kv = K[:, :n], K[:, n:]
    U = 0.5 * (Ku - 1j * Kv)
    V = 0.5 * (Ku + 1j * Kv)
    A = 0.5j * U
    H = 0.5j * V.T
    scale = max(1.0, np.abs(A).max(), np.abs(H).max())
    asym = max(float(np.abs(A - A.T).max()), float(np.abs(H - H.conj().T).max()))
    if asym > 1e3 * tol * scale:
        raise NotLagrangianConsistent(f"recovered weight not symmetric/Hermitian (residual {asym:.3g})")
    return WeightPlane(PshWeight(0.5 * (A + A.T), 0.5 * (H + H.conj().T), 0.5j * k0, 0.0))


def translation_constant(phi, m):
    """
    Constant ``C_1`` fixing ``Psi`` in the translation formula.

    It is the time-one constant of the real Hamilton-Jacobi flow of
    ``p = -Im m`` written in real coordinates ``(r, eta)`` where
    ``xi = -eta_v - i eta_u``: ``C_1 = 1/2 p'_eta.(p'_r + A0 p'_eta)`` with
    ``A0`` the real Hessian of ``Phi``.
    """
    p_r = np.concatenate([-m.lx.imag, -m.lx.real])
    p_eta = np.concatenate([m.lxi.real, m.lxi.imag])
    A0 = phi.real_form().M
    return float(0.5 * p_eta @ (p_r + A0 @ p_eta))


def translate_plane(phi, m):
    """
    Weight of ``exp(H_m)(Lambda_Phi)`` for a linear form ``m``.

    ``Psi(x) = Phi(x) + Im m(x, (2/i) dPhi/dx(x)) + C_1`` with ``C_1`` from
    :func:`translation_constant`.
    """
    mx, mxi = m.lx, m.lxi
    alpha = mx - 2j * phi.A @ mxi
    beta = -2j * phi.H @ mxi
    c = -2j * mxi @ phi.a + m.const
    a_add = 0.5 * (-1j * alpha + 1j * beta.conj())
    e = phi.e + c.imag + translation_constant(phi, m)
    return PshWeight(phi.A, phi.H, phi.a + a_add, e)


@dataclass(frozen=True, eq=False)
class IntersectionLocus:
    """``L = Lambda_Phi ∩ Lambda_Phi0`` and its x-projection.

    ``basis`` columns are complex 2n-vectors, orthonormal in the real inner
    product of C^{2n} = R^{4n}. ``x_basis`` is an orthonormal real basis of
    ``pi_x L`` in coordinates ``r = (Re x, Im x)``.
    """

    basis: np.ndarray
    x_basis: np.ndarray
    kernel: np.ndarray
    im_form: np.ndarray
    condition: float

    @property
    def dim(self):
        return self.basis.shape[1]

    def x_distance_sq(self, x):
        x = np.asarray(x, dtype=complex)
        r = np.concatenate([x.real, x.imag], axis=-1)
        P = self.x_basis
        d = r - (r @ P) @ P.T
        return np.sum(d * d, axis=-1)


def _orthonormal_columns(R, tol):
    if R.shape[1] == 0:
        return R, 1.0
    U, s, _ = np.linalg.svd(R, full_matrices=False)
    k = int(np.sum(s > tol * s[0]))
    cond = float(s[0] / s[k - 1]) if k else float("inf")
    return U[:, :k], cond


def im_form_on_plane(F, plane):
    """Real matrix ``N`` with ``Im F(rho(r)) = 1/2 r.N r`` on the plane."""
    G, _ = plane.parametrization()
    return (G.T @ F.Theta @ G).imag


def intersection_locus(F, phi0, tol=DEFAULT_TOL):
    """
    Intersection of ``Lambda_Phi = kappa_F(Lambda_Phi0)`` with ``Lambda_Phi0``.

    It equals ``(1 - Fm/2) K`` where ``K`` is the kernel (zero set) of the
    positive semidefinite real form ``Im F`` on ``Lambda_Phi0``.

    Raises
    ------
    PositivityViolation
        If ``Im F`` is not positive semidefinite on ``Lambda_Phi0``.
    """
    plane = WeightPlane(phi0)
    G, _ = plane.parametrization()
    N = 0.5 * (im_form_on_plane(F, plane) + im_form_on_plane(F, plane).T)
    # Im F may vanish up to rounding; measure it against all of F on the plane
    scale = np.linalg.norm(G.T @ F.Theta @ G, 2)
    cls = psd_classify(N, tol, scale=scale)
    if cls not in (Definiteness.POS_DEF, Definiteness.POS_SEMI_DEF, Definiteness.ZERO):
        raise PositivityViolation(f"Im F on the weight plane is {cls.value}")
    mu, V = np.linalg.eigh(N)
    thr = tol * max(np.linalg.norm(N, 2), scale)
    Kr = V[:, np.abs(mu) <= thr]
    Fm = fundamental_matrix(F)
    Lc = (np.eye(2 * phi0.n) - 0.5 * Fm) @ (G @ Kr)
    n2 = 2 * phi0.n
    Lr, cond = _orthonormal_columns(_real_stack(Lc), tol)
    basis = Lr[:n2] + 1j * Lr[n2:]
    Px, cond_x = _orthonormal_columns(_real_stack(basis[: phi0.n]), tol)
    return IntersectionLocus(basis, Px, Kr, N, max(cond, cond_x))
