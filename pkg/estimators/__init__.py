"""
Change point and diffusivity estimators built on the per-site functionals.

Main components:
- estimate_simultaneous: joint M-estimator of (theta_-, theta_+, theta_circ, k) via the closed-form profile
- estimate_cusum_known_theta: CUSUM change point estimator for known diffusivities
- centered_trace: the same objective rewritten in martingale / quadratic variation form
"""

from .models import CusumResult, DegenerateBlock, EstimateResult
from .simultaneous import clip_to_band, estimate_simultaneous, group_maximum, profile_objective
from .cusum import centered_trace, cusum_objective, estimate_cusum_known_theta

__all__ = [
    "CusumResult",
    "DegenerateBlock",
    "EstimateResult",
    "clip_to_band",
    "estimate_simultaneous",
    "group_maximum",
    "profile_objective",
    "centered_trace",
    "cusum_objective",
    "estimate_cusum_known_theta",
]
