"""
Measurement kernels and their projection onto the eigenbasis.

Main components:
- MeasurementKernel: unit-norm C^2 kernel on [-1/2, 1/2] (polynomial or bump family)
- MeasurementGrid: n non-overlapping windows of width delta = 1/n and the block k_bullet
- scaled_kernel: K_{delta,i}, its gradient and Laplacian
- kernel_eigen_coeffs / eigen_coefficients_all: a_k = <K_{delta,i}, e_k>, b_k = <Delta K_{delta,i}, e_k>
"""

from .models import (
    KernelFamily,
    MeasurementGrid,
    MeasurementKernel,
    QuadratureNonConvergence,
    ScaledKernel,
    kernel_d1,
    kernel_d2,
    kernel_value,
    scaled_kernel,
)
from .coefficients import SiteCoefficients, eigen_coefficients_all, kernel_eigen_coeffs, panel_count

__all__ = [
    "KernelFamily",
    "MeasurementGrid",
    "MeasurementKernel",
    "QuadratureNonConvergence",
    "ScaledKernel",
    "kernel_d1",
    "kernel_d2",
    "kernel_value",
    "scaled_kernel",
    "SiteCoefficients",
    "eigen_coefficients_all",
    "kernel_eigen_coeffs",
    "panel_count",
]
