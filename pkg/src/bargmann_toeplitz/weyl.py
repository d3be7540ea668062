"""
Weyl symbols of Toeplitz operators Top(e^Q) and the boundedness pipeline.

For a strictly plurisubharmonic quadratic form ``Phi0`` and a quadratic
polynomial ``Q`` the Weyl symbol on ``Lambda_Phi0`` is the normalized
Gaussian convolution

    a(x) = C * int exp(-4 Phi_herm(x - y) + Q(y)) L(dy),

which is ``exp(logC + P(x, conj x))`` with ``P`` quadratic. ``analyze``
extends ``P`` holomorphically to ``i(F + l)`` on C^{2n}, builds the
canonical maps attached to ``F`` and ``l`` and checks that ``Phi0 - Psi``
is bounded below for the image weight ``Psi``.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    BoundedReport,
    Definiteness,
    QuadExponent,
    RealQuadPoly,
    bounded_above,
    gaussian_marginalize,
    psd_classify,
)
from .errors import HypothesisFailed, InputError
from .forms import (
    ComplexQuadraticPolynomial,
    MajorizationReport,
    NondegeneracyReport,
    PshWeight,
    check_majorization,
    check_nondegeneracy,
    principal_part,
    to_real_form,
    to_real_form_hermitian,
)
from .symplectic import (
    ComplexLinearForm,
    HolomorphicQuadratic,
    SpectralReport,
    WeightPlane,
    image_plane,
    im_form_on_plane,
    kappa_F,
    kappa_full,
    spectral_report,
    translate_plane,
    translation_form,
)

DEFAULT_BAND = 1e-9

# agreement required between the two routes to Psi (relative to |Phi0|)
ROUTE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class SymbolExponent:
    """``a = exp(logC + P(x, conj x))`` on the weight plane."""

    P: ComplexQuadraticPolynomial
    logC: complex = 0.0

    def __call__(self, x):
        return np.exp(self.logC + self.P(x))

    def log_abs(self, x):
        return (self.logC + self.P(x)).real


def _joint_exponent(phi0, Q):
    # -4 Phi_herm(x - y) + Q(y) over (r_x, r_y) in R^{4n}
    Mh = to_real_form_hermitian(phi0.H).M
    gQ = Q.to_exponent()
    m = Mh.shape[0]
    S = np.block([[-4 * Mh, 4 * Mh], [4 * Mh, -4 * Mh + gQ.Sigma]])
    w = np.concatenate([np.zeros(m), gQ.w])
    return QuadExponent(S, w, gQ.e), m


def weyl_symbol(phi0, Q, tol=DEFAULT_TOL):
    """
    Weyl symbol exponent of ``Top(e^Q)`` on ``H_Phi0``.

    The Gaussian integral is evaluated in closed form by
    :func:`gaussian_marginalize` and divided by its value at ``Q = 0``, so
    that ``Q = 0`` gives ``P = 0`` and ``logC = 0`` exactly. All constants
    (including the constant term of the completed square) go to ``logC``.

    Raises
    ------
    HypothesisFailed
        If ``Re q < Phi_herm`` or ``det(2H - B_q) != 0`` fails.
    """
    if phi0.n != Q.n:
        raise InputError("dimension mismatch between Phi0 and Q")
    q = principal_part(Q)
    maj = check_majorization(phi0, q, tol)
    if not maj.holds:
        raise HypothesisFailed(
            f"Re q < Phi_herm fails (margin {maj.margin:.3g})", "majorization", maj.margin
        )
    nd = check_nondegeneracy(phi0, q, tol)
    if not nd.holds:
        raise HypothesisFailed(f"det(2H - B_q) = {nd.det:.3g}", "nondegeneracy", nd.det)

    g, m = _joint_exponent(phi0, Q)
    g0, _ = _joint_exponent(phi0, ComplexQuadraticPolynomial.zero(phi0.n))
    ys = range(m, 2 * m)
    r, lp = gaussian_marginalize(g, ys)
    r0, lp0 = gaussian_marginalize(g0, ys)
    P = ComplexQuadraticPolynomial.from_exponent(QuadExponent(r.Sigma - r0.Sigma, r.w - r0.w, 0.0))
    return SymbolExponent(P, (lp - lp0) + (r.e - r0.e))


@dataclass(frozen=True)
class SymbolBoundedReport:
    status: str  # "yes" | "no" | "marginal"
    witness: object
    report: BoundedReport


def _status(rep):
    if rep.marginal:
        return "marginal"
    return "yes" if rep.bounded else "no"


def symbol_bounded(s, tol=DEFAULT_TOL):
    """
    Is ``|a| = exp(Re logC + Re P)`` bounded on the weight plane?

    Eigenvalue decisions are measured against the size of the full complex
    quadratic part of ``P``, so an ``O(eps)`` real part next to an ``O(1)``
    imaginary part counts as zero. ``witness`` is a direction ``x`` in C^n
    along which ``|a|`` grows.
    """
    p = to_real_form(s.P)
    scale = np.linalg.norm(s.P.to_exponent().Sigma, 2)
    rep = bounded_above(p, tol, scale=scale)
    wit = None
    if rep.witness is not None:
        n = s.P.n
        wit = rep.witness[:n] + 1j * rep.witness[n:]
    return SymbolBoundedReport(_status(rep), wit, rep)


@dataclass(frozen=True, eq=False)
class HolomorphicSymbol:
    """``a = exp(logC) exp(i (F + l))`` on C^{2n}."""

    F: HolomorphicQuadratic
    l: ComplexLinearForm
    logC: complex = 0.0
    restriction_residual: float = 0.0

    def log_value(self, rho):
        return self.logC + 1j * (self.F(rho) + self.l(rho))

    def __call__(self, rho):
        return np.exp(self.log_value(rho))


def holomorphic_extension(s, phi0, check_points=20, seed=0):
    """
    Extend ``logC + P(x, conj x)`` from ``Lambda_Phi0`` to C^{2n}.

    On the plane ``xi = (2/i)(A x + H^T conj x + a)``, hence
    ``conj x = conj(H)^{-1}((i/2) xi - A x - a)``; substituting gives a
    holomorphic polynomial in ``rho = (x, xi)`` whose quadratic part is
    ``iF``, linear part ``i l`` and constant part goes to ``logC``.
    ``restriction_residual`` is the largest relative mismatch between the
    extension restricted to the plane and ``s`` at random points.
    """
    n = phi0.n
    Hbi = np.linalg.inv(phi0.H.conj())
    Z = np.hstack([-Hbi @ phi0.A, 0.5j * Hbi])  # conj x = Z rho + z0
    z0 = -Hbi @ phi0.a
    E = np.hstack([np.eye(n), np.zeros((n, n))])
    P = s.P
    quad = E.T @ P.A @ E + Z.T @ P.B @ E + Z.T @ P.C @ Z
    lin = E.T @ P.a + Z.T @ P.b + E.T @ (P.B.T @ z0) + 2 * Z.T @ (P.C @ z0)
    const = P.e + P.b @ z0 + z0 @ P.C @ z0
    Theta = -1j * (quad + quad.T)
    l = ComplexLinearForm.from_vector(-1j * lin)
    logC = s.logC + const
    F = HolomorphicQuadratic(Theta)

    rng = np.random.default_rng(seed)
    x = rng.normal(size=(check_points, n)) + 1j * rng.normal(size=(check_points, n))
    rho = WeightPlane(phi0).point(x)
    ref = s.logC + s.P(x)
    got = logC + 1j * (F(rho) + l(rho))
    res = float(np.max(np.abs(got - ref) / np.maximum(1.0, np.abs(ref))))
    return HolomorphicSymbol(F, l, logC, res)


def extension_bounded(hs, phi0, tol=DEFAULT_TOL):
    """
    Boundedness of ``exp(i(F + l))`` on ``Lambda_Phi0`` read off ``(F, l)``.

    ``|a| = exp(-Im F - Im l)`` there, so ``a`` is bounded iff
    ``Im F >= 0`` on the plane and ``Im l`` vanishes where ``Im F`` does.
    """
    plane = WeightPlane(phi0)
    G, g0 = plane.parametrization()
    N = im_form_on_plane(hs.F, plane)
    lin = (hs.l.vector @ G).imag + (hs.F.Theta @ g0 @ G).imag
    scale = np.linalg.norm(G.T @ hs.F.Theta @ G, 2)
    rep = bounded_above(RealQuadPoly(-N, -lin), tol, scale=scale)
    return SymbolBoundedReport(_status(rep), None, rep)


class Conclusion(str, Enum):
    BOUNDED = "Bounded"
    SYMBOL_UNBOUNDED = "SymbolUnbounded"
    MARGINAL = "Marginal"
    HYPOTHESIS_FAILED = "HypothesisFailed"
    SPECTRAL_OBSTRUCTION = "SpectralObstruction"
    INTERNAL_INCONSISTENCY = "InternalInconsistency"


@dataclass(eq=False)
class Verdict:
    """Everything ``analyze`` computed, with the final conclusion."""

    conclusion: Conclusion
    message: str
    majorization: MajorizationReport
    nondegeneracy: NondegeneracyReport
    symbol: SymbolExponent = None
    symbol_status: str = None
    symbol_report: SymbolBoundedReport = None
    extension: HolomorphicSymbol = None
    spectral: SpectralReport = None
    phi: PshWeight = None
    psi: PshWeight = None
    psi_direct: PshWeight = None
    route_residual: float = None
    phi_below_phi0: Definiteness = None
    certificate: BoundedReport = None
    operator_status: str = None
    model_family: bool = False
    tolerances: dict = field(default_factory=dict)


def is_model_family(phi0, Q):
    """``Phi0 = |x|^2/4`` and ``Q = lam|x|^2 + (linear) + const``."""
    n = phi0.n
    if not (
        np.array_equal(phi0.H, 0.25 * np.eye(n)) and not np.any(phi0.A) and phi0.is_homogeneous
    ):
        return False
    lam = Q.B[0, 0]
    return not np.any(Q.A) and not np.any(Q.C) and np.array_equal(Q.B, lam * np.eye(n))


def analyze(phi0, Q, tol=DEFAULT_TOL, band=DEFAULT_BAND):
    """
    Decide boundedness of ``Top(e^Q)`` on ``H_Phi0``.

    Steps: hypothesis checks; Weyl symbol; symbol boundedness; holomorphic
    extension to ``(F, l)``; spectrum of the fundamental matrix;
    ``Phi`` with ``kappa_F(Lambda_Phi0) = Lambda_Phi``; ``Psi`` by
    translating ``Lambda_Phi`` by ``H_m`` with ``m = -(l o kappa_F^{-1} + l)/2``
    (cross-checked against the image of ``Lambda_Phi0`` under the full
    affine map); finally the certificate ``Psi - Phi0`` bounded above.

    A bounded symbol with a failing certificate would contradict the
    theorem and is reported as ``InternalInconsistency``.
    """
    if not phi0.is_homogeneous:
        raise InputError("Phi0 must be a quadratic form")
    if not phi0.is_strictly_psh(tol):
        raise InputError("Phi0 is not strictly plurisubharmonic")
    model = is_model_family(phi0, Q)
    q = principal_part(Q)
    maj = check_majorization(phi0, q, tol)
    nd = check_nondegeneracy(phi0, q, tol)
    v = Verdict(
        Conclusion.HYPOTHESIS_FAILED, "", maj, nd, model_family=model,
        tolerances={"tol_psd": tol, "marginal_band": band},
    )
    if not maj.holds:
        v.message = f"Re q < Phi_herm fails (margin {maj.margin:.6g})"
        return v
    if not nd.holds:
        v.message = f"det d_x d_xbar (2 Phi0 - q) = {nd.det:.6g}"
        return v

    s = weyl_symbol(phi0, Q, tol)
    sb = symbol_bounded(s, band)
    v.symbol, v.symbol_status, v.symbol_report = s, sb.status, sb
    v.extension = hs = holomorphic_extension(s, phi0)
    v.spectral = spec = spectral_report(hs.F, tol)

    if sb.status == "no":
        v.conclusion = Conclusion.SYMBOL_UNBOUNDED
        if model:
            v.operator_status = "Unbounded"
            v.message = "Weyl symbol unbounded; operator unbounded (necessity holds for this family)"
        else:
            v.operator_status = "unknown (conjectured unbounded)"
            v.message = "Weyl symbol unbounded; the sufficient condition gives no conclusion"
        return v
    if not spec.admissible:
        v.conclusion = Conclusion.SPECTRAL_OBSTRUCTION
        v.message = f"fundamental matrix has eigenvalue {spec.offending:.6g} at +-2"
        return v

    kF = kappa_F(hs.F, tol)
    plane0 = WeightPlane(phi0)
    phi = image_plane(kF, plane0, tol).phi
    psi = translate_plane(phi, translation_form(hs.F, hs.l, tol))
    psi_direct = image_plane(kappa_full(hs.F, hs.l, tol), plane0, tol).phi
    v.phi, v.psi, v.psi_direct = phi, psi, psi_direct
    scale = np.linalg.norm(phi0.real_form().M, 2)
    v.route_residual = psi.max_abs_diff(psi_direct, include_constant=False) / scale
    v.phi_below_phi0 = psd_classify((phi0 - phi).real_form().M, tol, scale=scale)
    v.certificate = cert = bounded_above((psi - phi0).real_form(), tol, scale=scale)

    if sb.status == "marginal":
        v.conclusion = Conclusion.MARGINAL
        v.message = "symbol boundedness decided inside the tolerance band"
        v.operator_status = "bounded" if cert.bounded else "unknown"
        return v
    if not cert.bounded or v.route_residual > ROUTE_TOL:
        v.conclusion = Conclusion.INTERNAL_INCONSISTENCY
        v.message = (
            "bounded symbol but Phi0 - Psi not bounded below"
            if not cert.bounded
            else f"the two routes to Psi disagree ({v.route_residual:.3g})"
        )
        return v
    v.conclusion = Conclusion.BOUNDED
    v.operator_status = "Bounded"
    v.message = "Weyl symbol bounded and Phi0 - Psi bounded below"
    return v
