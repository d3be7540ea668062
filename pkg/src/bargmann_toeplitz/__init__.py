"""
Boundedness of Toeplitz operators ``Top(e^Q)`` with quadratic ``Q`` on
weighted Bargmann spaces ``H_Phi0(C^n)``, ``Phi0`` a strictly
plurisubharmonic quadratic form.

Modules
-------
algebra     real/complex quadratic forms, PSD tests, Gaussian integration
forms       quadratic polynomials in ``(x, conj x)`` and weights ``Phi``
symplectic  canonical maps of ``C^{2n}`` and their action on weight planes
weyl        Weyl symbol of ``Top(e^Q)`` and the ``analyze`` pipeline
family      closed forms for ``Phi0 = |x|^2/4``, ``Q = lam|x|^2 + linear``
oracle      brute-force quadrature used to check the closed forms
cli         command line front end
"""
from .algebra import (
    Definiteness,
    QuadExponent,
    RealQuadPoly,
    bounded_above,
    gaussian_marginalize,
    psd_classify,
)
from .errors import (
    BargmannError,
    DivergentIntegralError,
    HypothesisFailed,
    InputError,
    NotAGraph,
    NotLagrangianConsistent,
    PositivityViolation,
    SpectralObstruction,
    TruncationError,
)
from .family import (
    ExampleClass,
    classify_example,
    coherent_state,
    gamma,
    metaplectic_identities_check,
    model_problem,
    toeplitz_on_kernel,
)
from .forms import ComplexQuadraticPolynomial, PshWeight, check_majorization, check_nondegeneracy
from .symplectic import (
    AffineCanonicalMap,
    ComplexLinearForm,
    HolomorphicQuadratic,
    WeightPlane,
    image_plane,
    intersection_locus,
    kappa_F,
    kappa_ell,
    kappa_full,
    translate_plane,
)
from .weyl import Conclusion, Verdict, analyze, holomorphic_extension, symbol_bounded, weyl_symbol

__version__ = "0.1.0"

__all__ = [
    "AffineCanonicalMap",
    "BargmannError",
    "ComplexLinearForm",
    "ComplexQuadraticPolynomial",
    "Conclusion",
    "Definiteness",
    "DivergentIntegralError",
    "ExampleClass",
    "HolomorphicQuadratic",
    "HypothesisFailed",
    "InputError",
    "NotAGraph",
    "NotLagrangianConsistent",
    "PositivityViolation",
    "PshWeight",
    "QuadExponent",
    "RealQuadPoly",
    "SpectralObstruction",
    "TruncationError",
    "Verdict",
    "WeightPlane",
    "analyze",
    "bounded_above",
    "check_majorization",
    "check_nondegeneracy",
    "classify_example",
    "coherent_state",
    "gamma",
    "gaussian_marginalize",
    "holomorphic_extension",
    "image_plane",
    "intersection_locus",
    "kappa_F",
    "kappa_ell",
    "kappa_full",
    "metaplectic_identities_check",
    "model_problem",
    "psd_classify",
    "symbol_bounded",
    "toeplitz_on_kernel",
    "translate_plane",
    "weyl_symbol",
]
