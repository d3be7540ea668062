"""
The full pipeline on a random two-variable instance.

Builds a weight and a quadratic Q that satisfies the majorization
hypothesis, then prints each intermediate object: the Weyl symbol
exponent, its holomorphic extension, the spectrum of the fundamental
matrix, the image weight and the final verdict.
"""
import numpy as np

from bargmann_toeplitz import analyze
from bargmann_toeplitz.forms import ComplexQuadraticPolynomial, PshWeight

np.set_printoptions(precision=4, suppress=True)


def instance(seed=3):
    rng = np.random.default_rng(seed)
    n = 2
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    H = X @ X.conj().T / n + 0.5 * np.eye(n)
    Y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    phi0 = PshWeight(0.15 * (Y + Y.T), H)
    # a strongly negative Hermitian part keeps Re q well below the weight
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q = ComplexQuadraticPolynomial(
        0.1 * (Z + Z.T), -1.5 * H + 0.2 * Z, np.zeros((n, n)),
        rng.normal(size=n) + 1j * rng.normal(size=n), rng.normal(size=n) + 0j, 0.0,
    )
    return phi0, Q


def main():
    phi0, Q = instance()
    v = analyze(phi0, Q)
    print("majorization holds:", v.majorization.holds, " margin", round(v.majorization.margin, 4))
    print("nondegeneracy holds:", v.nondegeneracy.holds, " det", np.round(v.nondegeneracy.det, 4))
    if v.symbol is not None:
        print("\nWeyl symbol exponent, Hermitian block B:\n", v.symbol.P.B)
        print("symbol bounded:", v.symbol_status)
    if v.spectral is not None:
        print("\nfundamental matrix eigenvalues:", np.round(v.spectral.eigenvalues, 4))
        print("distance to +-2:", round(v.spectral.distance_to_pm2, 4))
    if v.phi is not None:
        print("\nimage weight H:\n", v.phi.H)
        print("Phi0 - Phi:", v.phi_below_phi0.value)
    print("\nconclusion:", v.conclusion.value, "/", v.operator_status)


if __name__ == "__main__":
    main()
