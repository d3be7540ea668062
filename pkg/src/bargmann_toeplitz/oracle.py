"""
Brute-force quadrature over C^n = R^{2n} (n <= 2).

Nothing in this module uses the closed-form Gaussian formulas; integrands
are evaluated pointwise and summed on tensor grids. A caller describes
where the integrand lives by a Gaussian envelope: ``|f(y)|`` is at most
of order ``exp(-1/2 (y - c).D (y - c))``. The grid is laid out in the
whitened variable ``t`` with ``y = c + L^{-T} t``, ``D = L L^T``, where the
envelope is ``exp(-|t|^2/2)``.

The default rule is the trapezoid rule on ``[-R, R]^m`` (spectrally
accurate for smooth rapidly decaying integrands). Its nodes at step ``h``
contain the nodes at step ``2h``, so one pass over the fine grid also
yields the coarse value and the error estimate ``|fine - coarse|``.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import RealQuadPoly
from .errors import HypothesisFailed, InputError, TruncationError
from .forms import ComplexQuadraticPolynomial, to_real_form

# mass beyond the box is below exp(-TAIL_EXPONENT)
TAIL_EXPONENT = 40.0
BOUNDARY_RATIO = 1e-8
MAX_N = 2


@dataclass(frozen=True)
class QuadratureGrid:
    """
    Tensor grid in whitened coordinates.

    ``points_per_axis`` is the coarse resolution; the value is computed on
    the doubled grid (``2 N - 1`` trapezoid nodes, or ``2 N`` Gauss-Hermite
    nodes). ``radius`` defaults to ``sqrt(TAIL_EXPONENT / 0.5)``, the point
    where the whitened envelope ``exp(-|t|^2/2)`` drops below
    ``exp(-TAIL_EXPONENT)``.
    """

    scheme: str = "trapezoid"
    points_per_axis: int = 24
    radius: float = None

    def __post_init__(self):
        if self.scheme not in ("trapezoid", "gauss-hermite"):
            raise InputError(f"unknown quadrature scheme {self.scheme!r}")
        if self.points_per_axis < 8:
            raise InputError("points_per_axis must be >= 8")
        if self.radius is not None and self.radius <= 0:
            raise InputError("radius must be positive")

    @property
    def box(self):
        return self.radius if self.radius is not None else float(np.sqrt(TAIL_EXPONENT / 0.5))

    def rules(self):
        """1-D ``(nodes, fine_weights, coarse_mask, coarse_weights)``.

        For Gauss-Hermite the two rules are not nested; the coarse rule is
        returned separately as ``(coarse_nodes, coarse_weights)``.
        """
        N = self.points_per_axis
        if self.scheme == "trapezoid":
            R = self.box
            t = np.linspace(-R, R, 2 * N - 1)
            h = t[1] - t[0]
            return t, np.full(t.size, h), (np.arange(t.size) % 2 == 0), np.full(N, 2 * h)
        tf, wf = np.polynomial.hermite_e.hermegauss(2 * N)
        tc, wc = np.polynomial.hermite_e.hermegauss(N)
        # weights include the exp(-t^2/2) factor the integrand already carries
        return tf, wf * np.exp(tf**2 / 2), (tc, wc * np.exp(tc**2 / 2)), None


@dataclass(frozen=True)
class ProbeResult:
    value: object
    error_estimate: float
    grid: QuadratureGrid = field(default_factory=QuadratureGrid)


@dataclass(frozen=True, eq=False)
class Integrand:
    """Pointwise integrand on R^m with a Gaussian envelope ``(center, decay)``."""

    func: object
    center: np.ndarray
    decay: np.ndarray

    @classmethod
    def from_envelope(cls, func, p):
        """Envelope ``|f| ~ exp(p)`` for a concave :class:`RealQuadPoly` ``p``."""
        c, D = envelope(p)
        return cls(func, c, D)


def envelope(p):
    """``(center, decay)`` of ``exp(p)`` for a concave real quadratic ``p``."""
    D = -p.M
    try:
        np.linalg.cholesky(D)
    except np.linalg.LinAlgError:
        raise HypothesisFailed("integrand does not decay in every direction", "decay") from None
    return np.linalg.solve(D, p.b), D


def _whitening(D):
    L = np.linalg.cholesky(D)
    W = np.linalg.inv(L).T  # y = c + W t
    return W, 1.0 / float(np.prod(np.diag(L)))


def _integrate_many(func, centers, D, grid):
    """
    Integrate ``func`` around each row of ``centers`` with common decay ``D``.

    ``func`` maps an ``(K, P, m)`` array of points to ``(K, P)`` values.
    Returns ``(fine, coarse, boundary_ratio)`` arrays of length ``K``.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    K, m = centers.shape
    W, jac = _whitening(D)
    t, wf, coarse, wc = grid.rules()
    if grid.scheme == "gauss-hermite":
        fine = _gh_sum(func, centers, W, t, wf) * jac
        tc, wcc = coarse
        crs = _gh_sum(func, centers, W, tc, wcc) * jac
        return fine, crs, np.zeros(K)

    Nf = t.size
    rest = np.stack(np.meshgrid(*([t] * (m - 1)), indexing="ij"), -1).reshape(-1, m - 1) if m > 1 else np.zeros((1, 0))
    idx = np.stack(np.meshgrid(*([np.arange(Nf)] * (m - 1)), indexing="ij"), -1).reshape(-1, m - 1) if m > 1 else np.zeros((1, 0), int)
    rest_even = np.all(idx % 2 == 0, axis=1)
    rest_edge = np.any((idx == 0) | (idx == Nf - 1), axis=1)
    h = wf[0]
    fine = np.zeros(K, dtype=complex)
    crs = np.zeros(K, dtype=complex)
    fmax = np.zeros(K)
    emax = np.zeros(K)
    for i0 in range(Nf):
        tt = np.column_stack([np.full(rest.shape[0], t[i0]), rest])
        pts = centers[:, None, :] + (tt @ W.T)[None, :, :]
        vals = np.asarray(func(pts), dtype=complex).reshape(K, -1)
        fine += vals.sum(axis=1)
        if i0 % 2 == 0:
            crs += vals[:, rest_even].sum(axis=1)
        a = np.abs(vals)
        fmax = np.maximum(fmax, a.max(axis=1))
        edge = a if i0 in (0, Nf - 1) else a[:, rest_edge]
        if edge.size:
            emax = np.maximum(emax, edge.max(axis=1))
    fine *= h**m * jac
    crs *= (2 * h) ** m * jac
    ratio = np.where(fmax > 0, emax / np.where(fmax > 0, fmax, 1.0), 0.0)
    return fine, crs, ratio


def _gh_sum(func, centers, W, t, w):
    K, m = centers.shape
    T = np.stack(np.meshgrid(*([t] * m), indexing="ij"), -1).reshape(-1, m)
    Wt = np.prod(np.stack(np.meshgrid(*([w] * m), indexing="ij"), -1).reshape(-1, m), axis=1)
    out = np.zeros(K, dtype=complex)
    for s in range(0, T.shape[0], 4096):
        pts = centers[:, None, :] + (T[s:s + 4096] @ W.T)[None, :, :]
        out += np.asarray(func(pts), dtype=complex).reshape(K, -1) @ Wt[s:s + 4096]
    return out


def _check_boundary(ratio, grid):
    worst = float(np.max(ratio, initial=0.0))
    if worst > BOUNDARY_RATIO:
        raise TruncationError(
            f"integrand mass on the box boundary (ratio {worst:.2e})",
            suggested_radius=1.5 * grid.box,
        )


def quad_integrate(f, grid=None):
    """
    Integrate ``f`` (an :class:`Integrand`) over R^m, ``m <= 4``.

    Raises
    ------
    TruncationError
        If the integrand on the boundary of the box exceeds ``1e-8`` of its
        maximum, i.e. the envelope supplied does not describe ``f``.
    """
    grid = grid or QuadratureGrid()
    c = np.asarray(f.center, dtype=float).reshape(-1)
    if c.size > 2 * MAX_N:
        raise InputError(f"quadrature oracle supports n <= {MAX_N}")

    def batched(pts):
        K, P, m = pts.shape
        return np.asarray(f.func(pts.reshape(-1, m))).reshape(K, P)

    fine, crs, ratio = _integrate_many(batched, c[None, :], f.decay, grid)
    _check_boundary(ratio, grid)
    return ProbeResult(complex(fine[0]), float(abs(fine[0] - crs[0])), grid)


def _points_to_complex(pts):
    m = pts.shape[-1] // 2
    return pts[..., :m] + 1j * pts[..., m:]


# ---------------------------------------------------------------------------
# Gaussian convolution defining the Weyl symbol


def weyl_integrand(phi0, Q, x):
    """``y -> exp(-4 Phi_herm(x - y) + Q(y))`` with its envelope."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    n = phi0.n
    H = phi0.H
    z = np.zeros((n, n))
    herm = ComplexQuadraticPolynomial(z, H, z, None, None)

    def func(pts):
        y = _points_to_complex(pts)
        dz = x - y
        return np.exp(-4 * herm(dz).real + Q(y))

    # envelope: -4 Phi_herm(x - y) + Re Q(y) as a real quadratic in y
    shifted = ComplexQuadraticPolynomial(z, H, z, -(x.conj() @ H), -(H @ x), x.conj() @ H @ x)
    p = to_real_form(Q - shifted.scaled(4))
    return Integrand.from_envelope(func, p)


def weyl_symbol_quadrature(phi0, Q, x, grid=None):
    """Normalized Weyl symbol ``a(x)`` by brute-force quadrature.

    The normalization (the same integral with ``Q = 0``) is computed with
    the same grid.
    """
    grid = grid or QuadratureGrid()
    num = quad_integrate(weyl_integrand(phi0, Q, x), grid)
    den = quad_integrate(weyl_integrand(phi0, ComplexQuadraticPolynomial.zero(phi0.n), np.zeros(phi0.n)), grid)
    val = num.value / den.value
    err = abs(val) * (num.error_estimate / abs(num.value) + den.error_estimate / abs(den.value))
    return ProbeResult(val, float(err), grid)


# ---------------------------------------------------------------------------
# Projection onto the model Bargmann space (Phi0 = |x|^2/4)


@dataclass(frozen=True, eq=False)
class GaussianTimes:
    """Function ``u`` on C^n with ``|u| ~ exp(Re E)``, ``E`` quadratic.

    ``func`` takes complex points of shape ``(..., n)``.
    """

    func: object
    log_envelope: ComplexQuadraticPolynomial

    @property
    def n(self):
        return self.log_envelope.n


def _model_weight_poly(n):
    # 2 Phi0(y) = |y|^2 / 2
    return ComplexQuadraticPolynomial.from_parts(n, B=0.5 * np.eye(n))


def _project(u, x_points, grid, a=None):
    """Fine/coarse values of ``Pi u`` at ``x_points`` (model weight)."""
    n = u.n
    if n > MAX_N:
        raise InputError(f"quadrature oracle supports n <= {MAX_N}")
    x = np.atleast_2d(np.asarray(x_points, dtype=complex))
    base = to_real_form(u.log_envelope - _model_weight_poly(n))
    c0, D = envelope(base)
    # |exp(x.conj(y)/2)| = exp((Re x).(Re y)/2 + (Im x).(Im y)/2)
    gx = 0.5 * np.column_stack([x.real, x.imag])
    centers = c0[None, :] + np.linalg.solve(D, gx.T).T

    def func(pts):
        y = _points_to_complex(pts)
        kern = np.exp(0.5 * np.einsum("ki,kpi->kp", x, y.conj()) - 0.5 * np.sum(np.abs(y) ** 2, axis=-1))
        return kern * u.func(y)

    fine, crs, ratio = _integrate_many(func, centers, D, grid)
    _check_boundary(ratio, grid)
    if a is None:
        a = projection_constant(n, grid)
    return a * fine, a * crs


@lru_cache(maxsize=32)
def projection_constant(n, grid):
    """
    Normalization ``a`` of the projection kernel, fixed numerically by the
    reproducing property ``Pi k_0 = k_0`` at ``x = 0``.
    """
    k0 = (2 * np.pi) ** (-n / 2)
    u = GaussianTimes(lambda y: np.full(y.shape[:-1], k0, dtype=complex), ComplexQuadraticPolynomial.zero(n))
    fine, _ = _project(u, np.zeros((1, n)), grid, a=1.0)
    return float((k0 / fine[0]).real)


def projection_apply(u, x_points, grid=None):
    """
    ``Pi u`` at the requested points for the model weight ``|x|^2/4``.

    ``Pi u(x) = a int exp(x.conj(y)/2) u(y) exp(-|y|^2/2) L(dy)``.
    """
    grid = grid or QuadratureGrid()
    fine, crs = _project(u, x_points, grid)
    return ProbeResult(fine, float(np.max(np.abs(fine - crs), initial=0.0)), grid)


def coherent_state_norm(w, grid=None):
    """``||k_w||`` in the model space by quadrature over C^n."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    n = w.size
    grid = grid or QuadratureGrid()

    def func(pts):
        x = _points_to_complex(pts)
        lk = 0.5 * x @ w.conj() - 0.25 * np.vdot(w, w).real - 0.5 * n * np.log(2 * np.pi)
        return np.exp(2 * lk.real - 0.5 * np.sum(np.abs(x) ** 2, axis=-1))

    # |k_w|^2 exp(-|x|^2/2) = (2 pi)^-n exp(-|x - w|^2/2)
    c = np.concatenate([w.real, w.imag])
    r = quad_integrate(Integrand(func, c, np.eye(2 * n)), grid)
    val = np.sqrt(r.value.real)
    return ProbeResult(float(val), float(r.error_estimate / (2 * val)), grid)


# ---------------------------------------------------------------------------
# Toeplitz probes on coherent states


def model_toeplitz_input(lam, c, d, w):
    """``e^Q k_w`` as a :class:`GaussianTimes` (evaluated pointwise)."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    n = c.size
    d = np.broadcast_to(np.asarray(d, dtype=complex), (n,))
    w = np.broadcast_to(np.asarray(w, dtype=complex), (n,))
    Q = ComplexQuadraticPolynomial.from_parts(n, B=lam * np.eye(n), a=0.5 * c.conj(), b=-0.5 * d)
    logk = ComplexQuadraticPolynomial.from_parts(
        n, a=0.5 * w.conj(), e=-0.25 * np.vdot(w, w).real - 0.5 * n * np.log(2 * np.pi)
    )
    E = Q + logk
    return GaussianTimes(lambda y: np.exp(E(y)), E)


def _fit_log_envelope(values_at, n, spread=1.0):
    """Fit a real quadratic to ``log |v(x)|^2 - |x|^2/2`` from a small stencil."""
    m = 2 * n
    pts = [np.zeros(m)]
    for i in range(m):
        for s in (-1, 1):
            e = np.zeros(m)
            e[i] = s * spread
            pts.append(e)
        for j in range(i + 1, m):
            e = np.zeros(m)
            e[i] = e[j] = spread
            pts.append(e)
            e = e.copy()
            e[j] = -spread
            pts.append(e)
    R = np.array(pts)
    x = R[:, :n] + 1j * R[:, n:]
    v = values_at(x)
    y = 2 * np.log(np.abs(v)) - 0.5 * np.sum(R * R, axis=1)
    iu = np.triu_indices(m)
    cols = [np.ones(len(R))] + [R[:, i] for i in range(m)]
    cols += [R[:, i] * R[:, j] * (0.5 if i == j else 1.0) for i, j in zip(*iu)]
    coef = np.linalg.lstsq(np.column_stack(cols), y, rcond=None)[0]
    M = np.zeros((m, m))
    for k, (i, j) in enumerate(zip(*iu)):
        M[i, j] = M[j, i] = coef[1 + m + k]
    return RealQuadPoly(M, coef[1:1 + m], coef[0])


def oracle_toeplitz_norm(lam, c, d, w, grid=None, outer_grid=None):
    """
    ``||Top(e^Q) k_w||`` in the model space, by nested quadrature (n = 1).

    The inner integral applies the projection to ``e^Q k_w``; the outer one
    integrates ``|.|^2 exp(-|x|^2/2)``. The outer envelope is fitted from a
    few inner evaluations, so no closed form enters.

    The inner integrand peaks at ``exp(|x|^2 / (16 (1/2 - Re lam)))`` while
    the result is much smaller, so the quadrature error grows with ``x``; the
    outer integral of its square converges only for ``Re lam < 1/4``.

    Raises
    ------
    HypothesisFailed
        If ``Re lam >= 1/4``.
    """
    if not complex(lam).real < 0.25:
        raise HypothesisFailed("nested probe needs Re lambda < 1/4", "re_lambda", lam)
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size != 1:
        raise InputError("nested Toeplitz probes are limited to n = 1")
    grid = grid or QuadratureGrid()
    outer_grid = outer_grid or grid
    u = model_toeplitz_input(lam, c, d, w)
    a = projection_constant(1, grid)
    envelope_poly = _fit_log_envelope(lambda x: _project(u, x, grid, a)[0], 1)
    co, Do = envelope(envelope_poly)

    vals = {}

    def func(pts):
        K, P, m = pts.shape
        x = _points_to_complex(pts.reshape(-1, m))
        fine, crs = _project(u, x, grid, a)
        wgt = np.exp(-0.5 * np.sum(np.abs(x) ** 2, axis=-1))
        vals["coarse"] = (np.abs(crs) ** 2 * wgt).reshape(K, P)
        return (np.abs(fine) ** 2 * wgt).reshape(K, P)

    # outer coarse sums must use the inner coarse values as well
    fine, _, ratio = _integrate_many(func, co[None, :], Do, outer_grid)
    _check_boundary(ratio, outer_grid)
    coarse_outer = _outer_coarse(u, co, Do, grid, outer_grid, a)
    val = float(np.sqrt(fine[0].real))
    err = abs(val - np.sqrt(max(coarse_outer, 0.0)))
    return ProbeResult(val, float(err), grid)


def _outer_coarse(u, co, Do, grid, outer_grid, a):
    # coarse outer nodes with coarse inner values
    W, jac = _whitening(Do)
    t, wf, _, _ = outer_grid.rules()
    tc = t[::2]
    h = 2 * wf[0]
    T = np.stack(np.meshgrid(tc, tc, indexing="ij"), -1).reshape(-1, 2)
    X = co[None, :] + T @ W.T
    x = X[:, :1] + 1j * X[:, 1:]
    _, crs = _project(u, x, grid, a)
    wgt = np.exp(-0.5 * np.sum(np.abs(x) ** 2, axis=-1))
    return float(np.sum(np.abs(crs) ** 2 * wgt) * h**2 * jac)


@dataclass(frozen=True)
class NormComparison:
    w: np.ndarray
    oracle_log_norm: np.ndarray
    closed_log_norm: np.ndarray
    fitted_constant: float
    relative_errors: np.ndarray
    max_relative_error: float
    error_estimates: np.ndarray


def compare_toeplitz_norms(lam, c, d, ws, grid=None):
    """
    Oracle norms against the closed-form w-dependence.

    One constant is fitted on the first probe point; the remaining points
    must match ``C exp(log_norm(w))`` on their own.
    """
    from .family import toeplitz_on_kernel

    ws = np.atleast_1d(np.asarray(ws, dtype=complex))
    res = [oracle_toeplitz_norm(lam, c, d, w, grid) for w in ws]
    on = np.array([r.value for r in res])
    cl = np.array([toeplitz_on_kernel(lam, c, d, w).log_norm for w in ws])
    C = on[0] / np.exp(cl[0])
    rel = np.abs(on / (C * np.exp(cl)) - 1.0)
    return NormComparison(
        ws, np.log(on), cl, float(np.log(C)), rel, float(rel[1:].max(initial=0.0)),
        np.array([r.error_estimate for r in res]),
    )


@dataclass(frozen=True)
class ScanResult:
    slope: float
    expected_slope: float
    linear: float
    radii: np.ndarray
    log_norms: np.ndarray
    oracle_radii: np.ndarray = None
    oracle_log_norms: np.ndarray = None
    oracle_max_residual: float = None
    tol: float = 1e-9

    @property
    def unbounded(self):
        # on |gamma| = 1 the growth is linear in r
        if self.slope > self.tol:
            return True
        return self.slope > -self.tol and self.linear > self.tol


def unboundedness_scan(lam, c, d, direction=1.0, radii=None, oracle_radii=(), grid=None, tol=1e-9):
    """
    Growth of ``log ||Top(e^Q) k_w||`` along ``w = r * direction``.

    Fits ``log_norm = s r^2 + t r + u`` by least squares and returns ``s``
    (the coefficient of ``|w|^2``) together with ``t``. The log-norms come from the closed form;
    at ``oracle_radii`` they are checked against quadrature up to a fitted
    constant.

    Requires ``Re lam < 1/2``, where the closed form of ``Top(e^Q) k_w`` is
    still defined; this is wider than the range where the operator theory
    applies and includes ``|gamma| = 2`` (``lam = 1/4``). Quadrature checks
    need ``Re lam < 1/4``.
    """
    from .family import toeplitz_on_kernel

    if not complex(lam).real < 0.5:
        raise HypothesisFailed("Re lambda must be < 1/2", "re_lambda", lam)
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    n = c.size
    u = np.broadcast_to(np.asarray(direction, dtype=complex), (n,)).copy()
    u /= np.linalg.norm(u)
    radii = np.linspace(1.0, 10.0, 10) if radii is None else np.asarray(radii, dtype=float)
    ln = np.array([toeplitz_on_kernel(lam, c, d, r * u).log_norm for r in radii])
    A = np.column_stack([radii**2, radii, np.ones_like(radii)])
    coef = np.linalg.lstsq(A, ln, rcond=None)[0]
    expected = (abs(1.0 / (1.0 - 2.0 * complex(lam))) ** 2 - 1) / 4
    out = dict(slope=float(coef[0]), expected_slope=expected, linear=float(coef[1]), radii=radii, log_norms=ln, tol=tol)
    if len(oracle_radii):
        orad = np.asarray(oracle_radii, dtype=float)
        cmp = compare_toeplitz_norms(lam, c, d, orad * u[0], grid)
        out.update(oracle_radii=orad, oracle_log_norms=cmp.oracle_log_norm, oracle_max_residual=cmp.max_relative_error)
    return ScanResult(**out)
