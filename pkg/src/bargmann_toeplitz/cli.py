"""
Command line front end.

Complex numbers are written as ``[re, im]`` everywhere, in problem files,
in output and in flag values. A flag value may also be a plain real
number; a vector is a list of such entries (``[[1, 0], [0, 2]]``), so a
bare two-element list is always one complex scalar.

Exit codes follow the conclusion of the analysis:

====  =====================
0     Bounded
10    SymbolUnbounded
11    Marginal
12    HypothesisFailed
13    SpectralObstruction
20    InternalInconsistency
2     bad input
1     oracle residual above threshold (``probe``)
====  =====================
"""
import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import BargmannError, HypothesisFailed, InputError, TruncationError
from .forms import ComplexQuadraticPolynomial, PshWeight
from .weyl import Conclusion, analyze, weyl_symbol

EXIT_CODES = {
    Conclusion.BOUNDED: 0,
    Conclusion.SYMBOL_UNBOUNDED: 10,
    Conclusion.MARGINAL: 11,
    Conclusion.HYPOTHESIS_FAILED: 12,
    Conclusion.SPECTRAL_OBSTRUCTION: 13,
    Conclusion.INTERNAL_INCONSISTENCY: 20,
}
EXIT_INPUT = 2
EXIT_RESIDUAL = 1

PARSE_TOL = 1e-12


# ---------------------------------------------------------------------------
# encoding


def enc(z):
    """JSON-native form of a complex scalar, vector or matrix."""
    if z is None:
        return None
    a = np.asarray(z)
    if a.ndim == 0:
        z = complex(a)
        return [_enc_float(z.real), _enc_float(z.imag)]
    return [enc(v) for v in a]


def _enc_float(x):
    x = float(x)
    return None if math.isnan(x) else x


def _real(x):
    x = float(x)
    return None if math.isnan(x) else x


def dec(obj, shape=None):
    """Inverse of :func:`enc`."""
    a = np.asarray(obj, dtype=float)
    if a.shape[-1:] != (2,):
        raise InputError("complex values must be [re, im] pairs")
    z = a[..., 0] + 1j * a[..., 1]
    if shape is not None and z.shape != shape:
        raise InputError(f"expected shape {shape}, got {z.shape}")
    return z


def parse_complex_flag(text, vector=False):
    """``"0.5"``, ``"[0.5, -1]"`` or, with ``vector``, ``"[[1, 0], [0, 2]]"``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse {text!r}: {exc.msg}") from None

    def scalar(o):
        if isinstance(o, (int, float)):
            return complex(o)
        if isinstance(o, list) and len(o) == 2 and all(isinstance(v, (int, float)) for v in o):
            return complex(o[0], o[1])
        raise InputError(f"not a complex number: {o!r}")

    if not vector:
        return scalar(obj)
    # a list holding at least one pair is a vector; [1, 2] alone is one scalar
    if isinstance(obj, list) and obj and any(isinstance(v, list) for v in obj):
        return np.array([scalar(v) for v in obj])
    return np.array([scalar(obj)])


# ---------------------------------------------------------------------------
# problem files


@dataclass(frozen=True, eq=False)
class ProblemFile:
    phi0: PshWeight
    Q: ComplexQuadraticPolynomial

    @property
    def n(self):
        return self.phi0.n

    def to_dict(self):
        Q = self.Q
        return {
            "n": self.n,
            "phi0": {"A": enc(self.phi0.A), "H": enc(self.phi0.H)},
            "Q": {"A": enc(Q.A), "B": enc(Q.B), "C": enc(Q.C), "a": enc(Q.a), "b": enc(Q.b), "e": enc(Q.e)},
        }

    @classmethod
    def from_dict(cls, d):
        try:
            n = d["n"]
            if not isinstance(n, int) or n < 1:
                raise InputError("n must be a positive integer")
            mat = (n, n)
            A0 = dec(d["phi0"]["A"], mat)
            H0 = dec(d["phi0"]["H"], mat)
            q = d["Q"]
            QA, QB, QC = (dec(q[k], mat) for k in ("A", "B", "C"))
            qa, qb = dec(q["a"], (n,)), dec(q["b"], (n,))
            qe = complex(dec(q["e"], ()))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed problem file: {exc!r}") from None
        for name, M in (("phi0.A", A0), ("Q.A", QA), ("Q.C", QC)):
            if np.max(np.abs(M - M.T), initial=0.0) > PARSE_TOL * max(1.0, np.max(np.abs(M))):
                raise InputError(f"{name} is not symmetric")
        if np.max(np.abs(H0 - H0.conj().T)) > PARSE_TOL * max(1.0, np.max(np.abs(H0))):
            raise InputError("phi0.H is not Hermitian")
        if np.linalg.eigvalsh((H0 + H0.conj().T) / 2)[0] <= 0:
            raise InputError("phi0.H is not positive definite")
        return cls(PshWeight(A0, H0), ComplexQuadraticPolynomial(QA, QB, QC, qa, qb, qe))


def load_problem(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg}, line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return ProblemFile.from_dict(data)


# ---------------------------------------------------------------------------
# reports


def _poly_dict(P):
    return {"A": enc(P.A), "B": enc(P.B), "C": enc(P.C), "a": enc(P.a), "b": enc(P.b), "e": enc(P.e)}


def _weight_dict(phi):
    if phi is None:
        return None
    return {"A": enc(phi.A), "H": enc(phi.H), "a": enc(phi.a), "e": _real(phi.e)}


def _bounded_dict(rep):
    if rep is None:
        return None
    return {
        "bounded": bool(rep.bounded),
        "definiteness": rep.definiteness.value,
        "max_eigenvalue": _real(rep.max_eigenvalue),
        "kernel_residual": _real(rep.kernel_residual),
        "marginal": bool(rep.marginal),
    }


@dataclass(frozen=True)
class VerdictReport:
    """
    JSON-native mirror of a :class:`~bargmann_toeplitz.weyl.Verdict`.

    ``data`` only holds dicts, lists, strings, bools, ``None`` and finite
    floats, so ``from_json(to_json())`` reproduces it exactly.
    """

    data: dict

    @property
    def conclusion(self):
        return Conclusion(self.data["conclusion"])

    @property
    def exit_code(self):
        return EXIT_CODES[self.conclusion]

    @classmethod
    def from_verdict(cls, v, timings=None):
        d = {
            "version": __version__,
            "conclusion": v.conclusion.value,
            "message": v.message,
            "operator_status": v.operator_status,
            "model_family": bool(v.model_family),
            "tolerances": {k: float(x) for k, x in v.tolerances.items()},
            "majorization": {
                "holds": bool(v.majorization.holds),
                "margin": _real(v.majorization.margin),
                "definiteness": v.majorization.definiteness.value,
            },
            "nondegeneracy": {"holds": bool(v.nondegeneracy.holds), "det": enc(v.nondegeneracy.det)},
            "symbol": None,
            "symbol_status": v.symbol_status,
            "symbol_witness": None,
            "extension": None,
            "spectral": None,
            "phi": _weight_dict(v.phi),
            "psi": _weight_dict(v.psi),
            "psi_direct": _weight_dict(v.psi_direct),
            "route_residual": None if v.route_residual is None else _real(v.route_residual),
            "phi_below_phi0": None if v.phi_below_phi0 is None else v.phi_below_phi0.value,
            "certificate": _bounded_dict(v.certificate),
        }
        if v.symbol is not None:
            d["symbol"] = {"P": _poly_dict(v.symbol.P), "logC": enc(v.symbol.logC)}
            d["symbol_witness"] = enc(v.symbol_report.witness)
        if v.extension is not None:
            hs = v.extension
            d["extension"] = {
                "Theta": enc(hs.F.Theta),
                "l": {"lx": enc(hs.l.lx), "lxi": enc(hs.l.lxi), "const": enc(hs.l.const)},
                "logC": enc(hs.logC),
                "restriction_residual": _real(hs.restriction_residual),
            }
        if v.spectral is not None:
            sp = v.spectral
            d["spectral"] = {
                "eigenvalues": enc(sp.eigenvalues),
                "distance_to_pm2": _real(sp.distance_to_pm2),
                "threshold": _real(sp.threshold),
                "admissible": bool(sp.admissible),
                "offending": enc(sp.offending),
            }
        if timings is not None:
            d["timings"] = {k: float(x) for k, x in timings.items()}
        return cls(d)

    def to_json(self, **kw):
        return json.dumps(self.data, **kw)

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text))


def _error_report(exc):
    out = {"version": __version__, "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, TruncationError) and exc.suggested_radius is not None:
        out["suggested_radius"] = exc.suggested_radius
    return out


def _emit(obj, stream):
    stream.write(json.dumps(obj, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, out):
    prob = load_problem(args.input)
    t0 = time.perf_counter()
    v = analyze(prob.phi0, prob.Q, tol=args.tol_psd, band=args.marginal_band)
    timings = {"analyze_seconds": time.perf_counter() - t0} if args.timings else None
    rep = VerdictReport.from_verdict(v, timings)
    _emit(rep.data, out)
    return rep.exit_code


def cmd_weyl(args, out):
    prob = load_problem(args.input)
    s = weyl_symbol(prob.phi0, prob.Q, tol=args.tol_psd)
    res = {"version": __version__, "P": _poly_dict(s.P), "logC": enc(s.logC)}
    code = 0
    if args.oracle:
        from .oracle import QuadratureGrid, weyl_symbol_quadrature

        if prob.n > 2:
            raise InputError("the quadrature oracle supports n <= 2")
        grid = QuadratureGrid(args.scheme, args.points_per_axis, args.radius)
        rng = np.random.default_rng(args.seed)
        rows = []
        for _ in range(args.oracle_points):
            x = rng.normal(size=prob.n) + 1j * rng.normal(size=prob.n)
            r = weyl_symbol_quadrature(prob.phi0, prob.Q, x, grid)
            closed = complex(s(x))
            rel = abs(r.value / closed - 1)
            rows.append({
                "x": enc(x), "closed": enc(closed), "oracle": enc(r.value),
                "relative_error": rel, "error_estimate": r.error_estimate,
            })
        worst = max(r["relative_error"] for r in rows) if rows else 0.0
        res["oracle"] = {"points": rows, "max_relative_error": worst, "threshold": args.oracle_rel}
        code = 0 if worst <= args.oracle_rel else EXIT_RESIDUAL
    _emit(res, out)
    return code


def _example_args(args):
    lam = parse_complex_flag(args.lam)
    c = parse_complex_flag(args.c, vector=True)
    d = parse_complex_flag(args.d, vector=True)
    if d.size == 1 and c.size > 1:
        d = np.full(c.size, d[0])
    if c.size == 1 and d.size > 1:
        c = np.full(d.size, c[0])
    if c.size != d.size:
        raise InputError("c and d must have the same length")
    return lam, c, d


def cmd_example(args, out):
    from .family import classify_example, model_problem, model_symbol, toeplitz_on_kernel

    lam, c, d = _example_args(args)
    cls = classify_example(lam, c, d, tol=args.marginal_band)
    s = model_symbol(lam, c, d)
    img = toeplitz_on_kernel(lam, c, d, np.zeros(c.size))
    g = cls.gamma
    res = {
        "version": __version__,
        "lambda": enc(lam),
        "gamma": enc(g),
        "abs_gamma": cls.abs_gamma,
        "classification": cls.verdict.value,
        "mismatch": cls.mismatch,
        "on_unit_circle": cls.boundary,
        "symbol": {"P": _poly_dict(s.P)},
        "log_norm": {
            # log norm = s |w|^2 + Re(w . v) + const
            "w_squared_coefficient": (abs(g) ** 2 - 1) / 4,
            "linear_coefficient": enc(0.5 * (abs(g) ** 2 * c - g * d).conj()),
            "constant": img.full_log_norm,
        },
    }
    if args.analyze:
        phi0, Q = model_problem(lam, c, d)
        res["analyze"] = VerdictReport.from_verdict(analyze(phi0, Q, band=args.marginal_band)).data
    _emit(res, out)
    return 0


def _parse_axis(text):
    parts = text.split(":")
    if len(parts) == 1:
        v = float(parts[0])
        return np.array([v])
    if len(parts) != 3:
        raise InputError(f"axis spec {text!r} is not lo:hi:count")
    lo, hi, k = float(parts[0]), float(parts[1]), int(parts[2])
    if k < 1:
        raise InputError("grid count must be >= 1")
    return np.linspace(lo, hi, k) if k > 1 else np.array([lo])


def parse_lambda_grid(text):
    """``"re_lo:re_hi:N,im_lo:im_hi:M"``; a single number is one point."""
    axes = text.split(",")
    if len(axes) == 1:
        axes.append("0")
    if len(axes) != 2:
        raise InputError("lambda grid needs a real and an imaginary axis")
    return _parse_axis(axes[0]), _parse_axis(axes[1])


SCAN_FIELDS = ["lambda_re", "lambda_im", "abs_gamma", "verdict", "slope", "marginal"]


def scan_rows(re_axis, im_axis, c, d, band):
    from .family import classify_example, log_norm_growth_rate

    if re_axis.max() >= 0.25:
        raise InputError("the lambda grid must stay inside Re lambda < 1/4")
    rows = []
    for lr in re_axis:
        for li in im_axis:
            lam = complex(lr, li)
            cls = classify_example(lam, c, d, tol=band)
            rows.append({
                "lambda_re": float(lr),
                "lambda_im": float(li),
                "abs_gamma": cls.abs_gamma,
                "verdict": cls.verdict.value,
                "slope": log_norm_growth_rate(lam),
                "marginal": abs(cls.abs_gamma - 1) < band,
            })
    return rows


def cmd_scan(args, out):
    _, c, d = _example_args(args)
    rows = scan_rows(*parse_lambda_grid(args.lambda_grid), c, d, args.marginal_band)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "abs_gamma": repr(r["abs_gamma"]), "slope": repr(r["slope"]), "marginal": int(r["marginal"])})
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return 0


def cmd_probe(args, out):
    from .family import toeplitz_on_kernel
    from .oracle import QuadratureGrid, oracle_toeplitz_norm

    lam, c, d = _example_args(args)
    if c.size != 1:
        raise InputError("probe is limited to n = 1")
    ws = parse_complex_flag(args.w, vector=True)
    grid = QuadratureGrid(args.scheme, args.points_per_axis, args.radius)
    rows = []
    C = None
    for w in ws:
        closed = toeplitz_on_kernel(lam, c, d, w).full_log_norm
        r = oracle_toeplitz_norm(lam, c, d, w, grid)
        lo = math.log(r.value)
        if C is None:
            C = lo - closed  # one fitted constant, on the first point
        rows.append({
            "w": enc(w), "closed_log_norm": closed, "oracle_norm": r.value, "oracle_log_norm": lo,
            "residual": abs(math.exp(lo - closed - C) - 1), "error_estimate": r.error_estimate,
        })
    worst = max((r["residual"] for r in rows[1:]), default=0.0)
    _emit({
        "version": __version__, "lambda": enc(lam), "fitted_log_constant": C,
        "rows": rows, "max_residual": worst, "threshold": args.oracle_rel,
    }, out)
    return 0 if worst <= args.oracle_rel else EXIT_RESIDUAL


# ---------------------------------------------------------------------------


def _add_tolerances(p):
    p.add_argument("--tol-psd", type=float, default=1e-9, help="relative PSD threshold")
    p.add_argument("--marginal-band", type=float, default=1e-9, help="width of the marginal band")


def _add_example(p):
    p.add_argument("--lambda", dest="lam", required=True, help="lambda as x or [re, im]")
    p.add_argument("--c", default="0", help="c as a complex scalar or a list of them")
    p.add_argument("--d", default="0", help="d as a complex scalar or a list of them")


def _add_grid(p):
    p.add_argument("--scheme", default="trapezoid", choices=["trapezoid", "gauss-hermite"])
    p.add_argument("--points-per-axis", type=int, default=24)
    p.add_argument("--radius", type=float, default=None, help="box half-width in whitened units")
    p.add_argument("--oracle-rel", type=float, default=1e-3, help="residual threshold")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="bargmann-toeplitz",
        description="Boundedness of Toeplitz operators with quadratic exponential symbols.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the boundedness pipeline on a problem file")
    p.add_argument("input")
    _add_tolerances(p)
    p.add_argument("--timings", action="store_true", help="add wall-clock timings (non-deterministic)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("weyl", help="Weyl symbol exponent of a problem file")
    p.add_argument("input")
    _add_tolerances(p)
    p.add_argument("--oracle", action="store_true", help="compare against quadrature")
    p.add_argument("--oracle-points", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    _add_grid(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("example", help="closed-form data for the model family")
    _add_example(p)
    _add_tolerances(p)
    p.add_argument("--analyze", action="store_true", help="also run the general pipeline")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("scan", help="verdicts over a lambda grid (CSV)")
    p.add_argument("--lambda-grid", required=True, help="re_lo:re_hi:N,im_lo:im_hi:M")
    p.add_argument("--c", default="0")
    p.add_argument("--d", default="0")
    p.add_argument("--out", default=None, help="CSV path (default: standard output)")
    _add_tolerances(p)
    p.set_defaults(func=cmd_scan, lam="0")

    p = sub.add_parser("probe", help="coherent-state norms: closed form against quadrature")
    _add_example(p)
    p.add_argument("--w", required=True, help="list of complex w values")
    _add_grid(p)
    p.set_defaults(func=cmd_probe)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args, out)
    except HypothesisFailed as exc:
        _emit({**_error_report(exc), "conclusion": Conclusion.HYPOTHESIS_FAILED.value}, out)
        return EXIT_CODES[Conclusion.HYPOTHESIS_FAILED]
    except (InputError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit(_error_report(exc), out)
        return EXIT_INPUT
    except BargmannError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit(_error_report(exc), out)
        return EXIT_INPUT
