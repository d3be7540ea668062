"""
Quadratic polynomials on C^n.

Coordinates are fixed once and for all:

    Q(x) = x.A x + conj(x).B x + conj(x).C conj(x) + a.x + b.conj(x) + e

with ``A``, ``C`` complex symmetric and the dot product bilinear (no
conjugation). Real weights are stored as

    Phi(x) = Re(x.A x) + conj(x).H x + 2 Re(a.x) + e

with ``H`` Hermitian, so that the mixed Hessian of ``Phi`` is read off
``H`` directly. The real coordinates of ``x`` are ``r = (Re x, Im x)``
and Lebesgue measure on C^n is the standard measure on R^{2n}.
"""
from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    Definiteness,
    QuadExponent,
    RealQuadPoly,
    psd_classify,
    symmetrize,
)
from .errors import InputError

# x = u + iv  ->  (x, conj x) = _T(n) @ (u, v)
def _T(n):
    I = np.eye(n)
    return np.block([[I, 1j * I], [I, -1j * I]])


def _Tinv(n):
    I = np.eye(n)
    return 0.5 * np.block([[I, I], [-1j * I, 1j * I]])


def _cvec(v, n, name):
    v = np.zeros(n, dtype=complex) if v is None else np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (n,):
        raise InputError(f"{name} must have length {n}")
    return v


def _cmat(M, n, name):
    M = np.zeros((n, n), dtype=complex) if M is None else np.atleast_2d(np.asarray(M, dtype=complex))
    if M.shape != (n, n):
        raise InputError(f"{name} must be {n}x{n}, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def hermitize(H, name="H", tol=1e-10):
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    scale = max(1.0, np.abs(H).max(initial=0.0))
    if np.abs(H - H.conj().T).max(initial=0.0) > tol * scale:
        raise InputError(f"{name} is not Hermitian")
    return 0.5 * (H + H.conj().T)


@dataclass(frozen=True, eq=False)
class ComplexQuadraticPolynomial:
    """Complex inhomogeneous quadratic polynomial in ``(x, conj x)``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    a: np.ndarray
    b: np.ndarray
    e: complex = 0.0

    def __post_init__(self):
        n = np.atleast_2d(np.asarray(self.B)).shape[0]
        object.__setattr__(self, "A", symmetrize(_cmat(self.A, n, "A"), name="A"))
        object.__setattr__(self, "B", _cmat(self.B, n, "B"))
        object.__setattr__(self, "C", symmetrize(_cmat(self.C, n, "C"), name="C"))
        object.__setattr__(self, "a", _cvec(self.a, n, "a"))
        object.__setattr__(self, "b", _cvec(self.b, n, "b"))
        object.__setattr__(self, "e", complex(self.e))

    @classmethod
    def zero(cls, n):
        z = np.zeros((n, n))
        return cls(z, z, z, None, None, 0.0)

    @classmethod
    def from_parts(cls, n, A=None, B=None, C=None, a=None, b=None, e=0.0):
        z = np.zeros((n, n))
        return cls(
            z if A is None else A,
            z if B is None else B,
            z if C is None else C,
            a if a is not None else np.zeros(n),
            b if b is not None else np.zeros(n),
            e,
        )

    @property
    def n(self):
        return self.B.shape[0]

    def __call__(self, x):
        return eval_poly(self, x)

    def coefficients(self):
        return (self.A, self.B, self.C, self.a, self.b, self.e)

    def _combine(self, other, f):
        return ComplexQuadraticPolynomial(
            *(f(p, q) for p, q in zip(self.coefficients(), other.coefficients()))
        )

    def __add__(self, other):
        return self._combine(other, lambda p, q: p + q)

    def __sub__(self, other):
        return self._combine(other, lambda p, q: p - q)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, t):
        return ComplexQuadraticPolynomial(*(t * c for c in self.coefficients()))

    def conj(self):
        """Coefficients of ``conj(Q(x))`` in the same convention."""
        return ComplexQuadraticPolynomial(
            self.C.conj(), self.B.conj().T, self.A.conj(), self.b.conj(), self.a.conj(),
            np.conj(self.e),
        )

    def max_abs_diff(self, other, include_constant=True):
        cs = list(zip(self.coefficients(), other.coefficients()))
        if not include_constant:
            cs = cs[:-1]
        return max(float(np.max(np.abs(np.asarray(p) - np.asarray(q)), initial=0.0)) for p, q in cs)

    def is_real_valued(self, tol=1e-12):
        scale = max(1.0, self.max_abs_diff(ComplexQuadraticPolynomial.zero(self.n)))
        return self.max_abs_diff(self.conj()) <= tol * scale

    def to_exponent(self):
        """Same polynomial as a :class:`QuadExponent` over ``r = (Re x, Im x)``."""
        n = self.n
        S = np.block([[2 * self.A, self.B.T], [self.B, 2 * self.C]])
        s = np.concatenate([self.a, self.b])
        T = _T(n)
        return QuadExponent(T.T @ S @ T, T.T @ s, self.e)

    @classmethod
    def from_exponent(cls, g):
        """Inverse of :meth:`to_exponent`; ``g`` lives on R^{2n}."""
        m = g.dim
        if m % 2:
            raise InputError("exponent dimension must be even")
        n = m // 2
        Ti = _Tinv(n)
        S = Ti.T @ g.Sigma @ Ti
        s = Ti.T @ g.w
        return cls(0.5 * S[:n, :n], S[n:, :n], 0.5 * S[n:, n:], s[:n], s[n:], g.e)


@dataclass(frozen=True, eq=False)
class PshWeight:
    """Real quadratic weight ``Re(x.Ax) + conj(x).H x + 2 Re(a.x) + e``."""

    A: np.ndarray
    H: np.ndarray
    a: np.ndarray = None
    e: float = 0.0

    def __post_init__(self):
        n = np.atleast_2d(np.asarray(self.H)).shape[0]
        object.__setattr__(self, "A", symmetrize(_cmat(self.A, n, "A"), name="A"))
        object.__setattr__(self, "H", hermitize(_cmat(self.H, n, "H")))
        object.__setattr__(self, "a", _cvec(self.a, n, "a"))
        e = complex(self.e)
        if abs(e.imag) > 1e-12 * max(1.0, abs(e)):
            raise InputError("weight constant must be real")
        object.__setattr__(self, "e", float(e.real))

    @classmethod
    def standard(cls, n, scale=0.25):
        """``scale * |x|^2``; the default is the model weight ``|x|^2/4``."""
        return cls(np.zeros((n, n)), scale * np.eye(n))

    @property
    def n(self):
        return self.H.shape[0]

    @property
    def is_homogeneous(self):
        return not np.any(self.a) and self.e == 0.0

    def __call__(self, x):
        return eval_poly(self.to_polynomial(), x).real

    def to_polynomial(self):
        return ComplexQuadraticPolynomial(
            0.5 * self.A, self.H, 0.5 * self.A.conj(), self.a, self.a.conj(), self.e
        )

    @classmethod
    def from_polynomial(cls, p, tol=1e-10):
        """Weight from a real-valued :class:`ComplexQuadraticPolynomial`."""
        if not p.is_real_valued(tol):
            raise InputError("polynomial is not real valued")
        return cls(2 * p.A, p.B, p.a, p.e.real)

    def real_form(self):
        return to_real_form(self.to_polynomial())

    def xi(self, x):
        """Fibre coordinate ``(2/i) dPhi/dx`` of the weight plane over ``x``."""
        x = np.asarray(x, dtype=complex)
        return -2j * (x @ self.A.T + x.conj() @ self.H + self.a)

    def is_strictly_psh(self, tol=DEFAULT_TOL):
        return psd_classify(np.real(to_real_form_hermitian(self.H).M), tol) == Definiteness.POS_DEF

    def __add__(self, other):
        return PshWeight(self.A + other.A, self.H + other.H, self.a + other.a, self.e + other.e)

    def __neg__(self):
        return PshWeight(-self.A, -self.H, -self.a, -self.e)

    def __sub__(self, other):
        return self + (-other)

    def with_constant(self, e):
        return PshWeight(self.A, self.H, self.a, e)

    def max_abs_diff(self, other, include_constant=True):
        d = [self.A - other.A, self.H - other.H, self.a - other.a]
        if include_constant:
            d.append(np.array(self.e - other.e))
        return max(float(np.max(np.abs(x), initial=0.0)) for x in d)


def eval_poly(p, x):
    """Evaluate ``p`` at ``x`` of shape ``(n,)`` or ``(..., n)``."""
    x = np.asarray(x, dtype=complex)
    if x.shape[-1:] != (p.n,):
        raise InputError(f"point has dimension {x.shape[-1:]}, expected {p.n}")
    xb = x.conj()
    return (
        np.einsum("...i,ij,...j->...", x, p.A, x)
        + np.einsum("...i,ij,...j->...", xb, p.B, x)
        + np.einsum("...i,ij,...j->...", xb, p.C, xb)
        + x @ p.a
        + xb @ p.b
        + p.e
    )


def to_real_form(p):
    """``Re p`` as a :class:`RealQuadPoly` on R^{2n} under ``x = u + iv``."""
    return p.to_exponent().real_part()


def to_real_form_hermitian(H):
    """Real form of ``conj(x).H x`` on R^{2n}."""
    n = np.atleast_2d(H).shape[0]
    z = np.zeros((n, n))
    return to_real_form(ComplexQuadraticPolynomial(z, H, z, None, None))


def hermitian_part(phi0):
    """
    Hermitian matrix of ``Phi_herm(x) = (Phi0(x) + Phi0(ix))/2``.

    The average cancels ``Re(x.Ax)``, leaving ``conj(x).H x``.
    """
    if not phi0.is_homogeneous:
        raise InputError("hermitian_part expects a quadratic form (a = 0, e = 0)")
    return phi0.H.copy()


def principal_part(Q):
    """Drop the linear and constant terms of ``Q``."""
    return ComplexQuadraticPolynomial(Q.A, Q.B, Q.C, None, None, 0.0)


@dataclass(frozen=True)
class MajorizationReport:
    holds: bool
    margin: float
    definiteness: Definiteness


def check_majorization(phi0, q, tol=DEFAULT_TOL):
    """
    Test ``Re q(x) < Phi_herm(x)`` for ``x != 0``.

    ``margin`` is the smallest eigenvalue of the real Hessian of
    ``Phi_herm - Re q`` (in the ``1/2 v.Mv`` convention on R^{2n}).
    """
    n = phi0.n
    z = np.zeros((n, n))
    herm = ComplexQuadraticPolynomial(z, hermitian_part(phi0), z, None, None)
    M = to_real_form(herm - principal_part(q)).M
    cls = psd_classify(M, tol)
    return MajorizationReport(cls == Definiteness.POS_DEF, float(np.linalg.eigvalsh(M)[0]), cls)


@dataclass(frozen=True)
class NondegeneracyReport:
    holds: bool
    det: complex


def check_nondegeneracy(phi0, q, tol=DEFAULT_TOL):
    """Test ``det d_x d_xbar (2 Phi0 - q) != 0``, i.e. ``det(2H - B_q) != 0``."""
    K = 2 * phi0.H - q.B
    det = complex(np.linalg.det(K))
    scale = np.linalg.norm(K, 2)
    return NondegeneracyReport(bool(abs(det) > tol * scale**phi0.n) if scale > 0 else False, det)


@dataclass(frozen=True, eq=False)
class Polarization:
    """Holomorphic ``Psi0(x, y) = 1/2 x.Ax + 1/2 y.conj(A) y + y.H x``."""

    A: np.ndarray
    H: np.ndarray

    def __call__(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return (
            0.5 * np.einsum("...i,ij,...j->...", x, self.A, x)
            + 0.5 * np.einsum("...i,ij,...j->...", y, self.A.conj(), y)
            + np.einsum("...i,ij,...j->...", y, self.H, x)
        )

    def restrict(self):
        """The weight ``x -> Psi0(x, conj x)``."""
        return PshWeight(self.A, self.H)


def polarization(phi0):
    """Unique holomorphic ``Psi0(x, y)`` with ``Psi0(x, conj x) = Phi0(x)``."""
    if not phi0.is_homogeneous:
        raise InputError("polarization expects a quadratic form")
    return Polarization(phi0.A.copy(), phi0.H.copy())
