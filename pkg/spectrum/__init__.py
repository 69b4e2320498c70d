"""
Spectrum of the divergence-form operator with a piecewise constant diffusivity.

Main components:
- DiffusivityProfile: theta_-, theta_+, tau and the admissible band
- decompose: semi-analytic eigenpairs via the matched-sine characteristic function
- fem_oracle: independent P1 finite element check of the same spectrum
- inverse_apply_second_derivative: closed-form Green function test case
"""

from .models import (
    BracketingFailure,
    DiffusivityProfile,
    FemSpectrum,
    IndexOutOfRange,
    SingularMatrix,
    SpectralDecomposition,
    SpectrumError,
)
from .solver import (
    characteristic_value,
    comparison_bounds,
    decompose,
    evaluate_eigenfunction,
    lambda_lower_bound,
    mode_amplitudes,
    polish_eigenvalue,
)
from .fem_oracle import fem_oracle, fem_eigenvalues_near
from .inverse import inverse_apply_second_derivative, spectral_inverse_second_derivative
from .quadrature import composite_gauss_legendre

__all__ = [
    "BracketingFailure",
    "DiffusivityProfile",
    "FemSpectrum",
    "IndexOutOfRange",
    "SingularMatrix",
    "SpectralDecomposition",
    "SpectrumError",
    "characteristic_value",
    "comparison_bounds",
    "decompose",
    "evaluate_eigenfunction",
    "lambda_lower_bound",
    "mode_amplitudes",
    "polish_eigenvalue",
    "fem_oracle",
    "fem_eigenvalues_near",
    "inverse_apply_second_derivative",
    "spectral_inverse_second_derivative",
    "composite_gauss_legendre",
]
