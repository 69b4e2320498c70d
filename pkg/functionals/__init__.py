"""
Sufficient statistics of the local measurements and their diagnostics.

Main components:
- compute_functionals: A_i = int X^Delta dX, I_{delta,i} = int (X^Delta)^2 dt, M_i = int X^Delta dB
- remainder_proxy: remainder R at the change point block from the discrete identity
- tail_diagnostic / bernstein_bound: concentration check of weighted quadratic variations
- expected_qv_bands / variance_bound: moment oracles used by the tests
"""

from .models import BlockFunctionals, MissingBrownianPath, Quadrature, QvBands, TailDiagnostic
from .compute import compute_functionals, export_functionals_csv, remainder_proxy
from .diagnostics import (
    bernstein_bound,
    expected_qv_bands,
    remainder_bound_minus,
    search_theta_circ,
    tail_diagnostic,
    theta_circ_reference,
    variance_bound,
)

__all__ = [
    "BlockFunctionals",
    "MissingBrownianPath",
    "Quadrature",
    "QvBands",
    "TailDiagnostic",
    "compute_functionals",
    "export_functionals_csv",
    "remainder_proxy",
    "bernstein_bound",
    "expected_qv_bands",
    "remainder_bound_minus",
    "search_theta_circ",
    "tail_diagnostic",
    "theta_circ_reference",
    "variance_bound",
]
