"""
Linear algebra of real and complex quadratic forms.

Three primitives live here:

* ``psd_classify`` -- definiteness of a real symmetric matrix with a
  relative eigenvalue threshold,
* ``bounded_above`` -- whether ``p(v) = 1/2 v.Mv + b.v + e`` is bounded
  above on R^m, with a divergence direction when it is not,
* ``gaussian_marginalize`` -- exact integration of ``exp(g)`` over a block
  of real variables when ``g`` is a complex quadratic exponent.

All matrices are small and dense.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DivergentIntegralError, InputError

DEFAULT_TOL = 1e-9

# symmetrization tolerance for user-supplied "symmetric" matrices
SYM_TOL = 1e-10


def _as_square(M, dtype=float, name="matrix"):
    M = np.atleast_2d(np.asarray(M, dtype=dtype))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def symmetrize(M, name="matrix", tol=SYM_TOL):
    """Return ``(M + M.T)/2`` after checking that ``M`` is symmetric.

    The check is relative to ``max(1, |M|)``; complex input stays complex.
    """
    M = np.asarray(M)
    dtype = complex if np.iscomplexobj(M) else float
    M = _as_square(M, dtype=dtype, name=name)
    scale = max(1.0, np.abs(M).max(initial=0.0))
    if np.abs(M - M.T).max(initial=0.0) > tol * scale:
        raise InputError(f"{name} is not symmetric")
    return 0.5 * (M + M.T)


class Definiteness(str, Enum):
    POS_DEF = "PosDef"
    POS_SEMI_DEF = "PosSemiDef"
    INDEFINITE = "Indefinite"
    NEG_SEMI_DEF = "NegSemiDef"
    NEG_DEF = "NegDef"
    ZERO = "Zero"

    def mirrored(self):
        return _MIRROR[self]


_MIRROR = {
    Definiteness.POS_DEF: Definiteness.NEG_DEF,
    Definiteness.POS_SEMI_DEF: Definiteness.NEG_SEMI_DEF,
    Definiteness.INDEFINITE: Definiteness.INDEFINITE,
    Definiteness.NEG_SEMI_DEF: Definiteness.POS_SEMI_DEF,
    Definiteness.NEG_DEF: Definiteness.POS_DEF,
    Definiteness.ZERO: Definiteness.ZERO,
}


def _threshold(M, tol, scale):
    ref = np.linalg.norm(M, 2) if M.size else 0.0
    if scale is not None:
        ref = max(ref, float(scale))
    return tol * ref


def psd_classify(M, tol=DEFAULT_TOL, scale=None):
    """
    Classify a real symmetric matrix by the signs of its eigenvalues.

    Eigenvalues with ``|mu| <= tol * max(|M|_2, scale)`` count as zero.
    ``scale`` lets a caller measure a near-zero difference of two forms
    against the size of the forms themselves.

    Parameters
    ----------
    M : (m, m) array_like
        Real symmetric matrix.
    tol : float
        Relative threshold, > 0.
    scale : float, optional
        Reference magnitude; defaults to the spectral norm of ``M``.

    Returns
    -------
    Definiteness
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    M = symmetrize(np.asarray(M, dtype=float), name="M")
    mu = np.linalg.eigvalsh(M)
    return _classify_eigs(mu, _threshold(M, tol, scale))


def _classify_eigs(mu, thr):
    pos = np.any(mu > thr)
    neg = np.any(mu < -thr)
    zero = np.any(np.abs(mu) <= thr)
    if pos and neg:
        return Definiteness.INDEFINITE
    if pos:
        return Definiteness.POS_SEMI_DEF if zero else Definiteness.POS_DEF
    if neg:
        return Definiteness.NEG_SEMI_DEF if zero else Definiteness.NEG_DEF
    return Definiteness.ZERO


def _near(value, thr, decades=1.0):
    # within `decades` orders of magnitude of the decision threshold
    if thr <= 0:
        return False
    f = 10.0**decades
    return thr / f < abs(value) <= thr * f


@dataclass(frozen=True)
class RealQuadPoly:
    """``p(v) = 1/2 v.Mv + b.v + e`` on R^m with ``M`` stored symmetrized."""

    M: np.ndarray
    b: np.ndarray
    e: float = 0.0

    def __post_init__(self):
        M = symmetrize(np.asarray(self.M, dtype=float), name="M")
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if b.shape != (M.shape[0],):
            raise InputError("b has the wrong length")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "e", float(self.e))

    @property
    def dim(self):
        return self.M.shape[0]

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", v, self.M, v) + v @ self.b + self.e

    def __neg__(self):
        return RealQuadPoly(-self.M, -self.b, -self.e)

    def __add__(self, other):
        return RealQuadPoly(self.M + other.M, self.b + other.b, self.e + other.e)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, t):
        return RealQuadPoly(t * self.M, t * self.b, t * self.e)


@dataclass(frozen=True)
class BoundedReport:
    """Outcome of :func:`bounded_above`.

    ``witness`` is a unit direction with ``p(t v) -> +inf`` when the
    polynomial is unbounded. ``marginal`` flags decisions that sit within
    one decade of a tolerance threshold.
    """

    bounded: bool
    witness: object
    definiteness: Definiteness
    max_eigenvalue: float
    kernel_residual: float
    marginal: bool


def bounded_above(p, tol=DEFAULT_TOL, scale=None):
    """
    Decide whether a real quadratic polynomial is bounded above.

    ``p`` is bounded above iff ``M`` is negative semidefinite and ``b`` has
    no component along the kernel of ``M``. Both decisions use the same
    eigen-decomposition and threshold as :func:`psd_classify`, so that rank
    decisions are consistent between the two.

    Parameters
    ----------
    p : RealQuadPoly
    tol : float
        Relative threshold.
    scale : float, optional
        Reference magnitude for ``M`` (see :func:`psd_classify`); the
        kernel test uses ``tol * (|b| + max(|M|, scale))``.

    Returns
    -------
    BoundedReport
    """
    M, b = p.M, p.b
    mu, V = np.linalg.eigh(M)
    thr = _threshold(M, tol, scale)
    cls = _classify_eigs(mu, thr)
    mnorm = thr / tol
    marginal = any(_near(m, thr) for m in mu)

    if cls in (Definiteness.POS_DEF, Definiteness.POS_SEMI_DEF, Definiteness.INDEFINITE):
        k = int(np.argmax(mu))
        return BoundedReport(False, V[:, k].copy(), cls, float(mu[-1]), float("nan"), marginal)

    kernel = V[:, np.abs(mu) <= thr]
    proj = kernel @ (kernel.T @ b)
    res = float(np.linalg.norm(proj))
    kthr = tol * (np.linalg.norm(b) + mnorm)
    marginal = marginal or _near(res, kthr)
    if res <= kthr:
        return BoundedReport(True, None, cls, float(mu[-1]) if mu.size else 0.0, res, marginal)
    return BoundedReport(False, proj / res, cls, float(mu[-1]), res, marginal)


@dataclass(frozen=True)
class QuadExponent:
    """``g(v) = 1/2 v.Sigma v + w.v + e`` over real ``v`` with complex data."""

    Sigma: np.ndarray
    w: np.ndarray
    e: complex = 0.0

    def __post_init__(self):
        S = np.atleast_2d(np.asarray(self.Sigma, dtype=complex))
        if S.size == 0:
            S = np.zeros((0, 0), dtype=complex)
        else:
            S = symmetrize(S, name="Sigma")
        w = np.asarray(self.w, dtype=complex).reshape(-1)
        if w.shape != (S.shape[0],):
            raise InputError("w has the wrong length")
        object.__setattr__(self, "Sigma", S)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "e", complex(self.e))

    @property
    def dim(self):
        return self.Sigma.shape[0]

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", v, self.Sigma, v) + v @ self.w + self.e

    def real_part(self):
        return RealQuadPoly(self.Sigma.real, self.w.real, self.e.real)

    def stationary_point(self):
        """Complex critical point ``-Sigma^{-1} w``."""
        return -np.linalg.solve(self.Sigma, self.w)


def logdet_principal(K):
    """Sum of principal logarithms of the eigenvalues of ``K``.

    For ``Re K`` positive definite every eigenvalue lies in the open right
    half plane, so this is the analytic continuation of ``log det`` from
    real positive definite matrices.
    """
    return complex(np.sum(np.log(np.linalg.eigvals(K).astype(complex))))


def gaussian_marginalize(g, integrate):
    """
    Integrate ``exp(g)`` over a subset of the real variables.

    Parameters
    ----------
    g : QuadExponent
        Exponent over variables ``(u, v)``.
    integrate : sequence of int
        Indices of the ``v`` variables. The remaining indices, in
        increasing order, become the variables of the result.

    Returns
    -------
    result : QuadExponent
        Exponent over ``u``.
    log_prefactor : complex
        ``(m_v/2) log(2 pi) - 1/2 log det(-Sigma_vv)`` with the principal
        branch per eigenvalue, so that
        ``int exp(g(u, v)) dv = exp(log_prefactor + result(u))``.

    Raises
    ------
    DivergentIntegralError
        If ``Re Sigma_vv`` is not negative definite.
    """
    m = g.dim
    iv = np.array(sorted(set(int(i) for i in integrate)), dtype=int)
    if iv.size and (iv.min() < 0 or iv.max() >= m):
        raise InputError("integration index out of range")
    iu = np.setdiff1d(np.arange(m), iv)
    if iv.size == 0:
        return g, 0j

    S = g.Sigma
    Svv = S[np.ix_(iv, iv)]
    Suv = S[np.ix_(iu, iv)]
    Suu = S[np.ix_(iu, iu)]
    wv, wu = g.w[iv], g.w[iu]

    if psd_classify(-Svv.real) != Definiteness.POS_DEF:
        raise DivergentIntegralError("Re Sigma_vv is not negative definite")

    X = np.linalg.solve(Svv, np.column_stack([Suv.T, wv]))
    SinvSvu, Sinvw = X[:, :-1], X[:, -1]
    Sres = Suu - Suv @ SinvSvu
    res = QuadExponent(
        0.5 * (Sres + Sres.T),
        wu - Suv @ Sinvw,
        g.e - 0.5 * wv @ Sinvw,
    )
    logpref = 0.5 * iv.size * np.log(2 * np.pi) - 0.5 * logdet_principal(-Svv)
    return res, complex(logpref)
