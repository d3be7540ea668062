"""
Closed forms against brute-force quadrature.

Each value is printed next to the quadrature error estimate. The final
check applies a Toeplitz operator with |gamma| < 1 to coherent states
and runs nested quadrature, so it takes a few seconds.
"""
import numpy as np

from bargmann_toeplitz import weyl_symbol
from bargmann_toeplitz.forms import ComplexQuadraticPolynomial, PshWeight
from bargmann_toeplitz.oracle import (
    QuadratureGrid,
    coherent_state_norm,
    compare_toeplitz_norms,
    weyl_symbol_quadrature,
)


def symbol_check():
    phi0 = PshWeight([[0.1 + 0.05j]], [[0.4]])
    Q = ComplexQuadraticPolynomial([[0.05j]], [[-0.2 + 0.3j]], [[0.02]], [0.3 - 0.1j], [0.2j], 0.1)
    s = weyl_symbol(phi0, Q)
    print("Weyl symbol, closed form against quadrature")
    for x in ([0.0], [1 - 0.5j], [-0.8 + 1.2j]):
        r = weyl_symbol_quadrature(phi0, Q, np.array(x), QuadratureGrid(points_per_axis=24))
        rel = abs(abs(r.value) / abs(s(np.array(x))) - 1)
        print(f"  x = {complex(x[0]):>12}  relative error {rel:.1e}  estimate {r.error_estimate:.1e}")


def coherent_check():
    print("\n||k_w|| by quadrature")
    for w in (0, 1, 2 + 1j, 3j):
        r = coherent_state_norm(w)
        print(f"  w = {complex(w):>8}  norm {r.value:.12f}  estimate {r.error_estimate:.1e}")


def toeplitz_check():
    lam, c, d = -0.5, 0.3 + 0.2j, -0.4j
    ws = [0, 0.5, 1j, -1 + 0.5j]
    cmp = compare_toeplitz_norms(lam, c, d, ws)
    print(f"\nlog ||Top(e^Q) k_w||, lambda = {lam}: oracle against closed form (one fitted constant)")
    for w, a, b, e in zip(cmp.w, cmp.oracle_log_norm, cmp.closed_log_norm, cmp.relative_errors):
        print(f"  w = {complex(w):>10}  oracle {a:+.8f}  closed {b + cmp.fitted_constant:+.8f}  rel {e:.1e}")


if __name__ == "__main__":
    symbol_check()
    coherent_check()
    toeplitz_check()
