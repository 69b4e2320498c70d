"""
Limit law of the change point estimator: argmin_h {B(h) + |h|/2}.

Main components:
- ArgminLawConfig: truncation, grid step, replicate count and seed
- sample_argmin: Monte Carlo oracle on a symmetric grid
- argmin_density / argmin_cdf: closed-form reference distribution
- normalize_change_point_errors: maps tau_hat - tau onto the limit scale
- ks_distance / ks_to_limit: Kolmogorov-Smirnov comparisons
"""

from .models import ArgminLawConfig, ArgminSummary
from .density import argmin_abs_quantile, argmin_cdf, argmin_density
from .sampler import (
    ks_distance,
    ks_to_limit,
    normalize_change_point_errors,
    sample_argmin,
    summarize_argmin,
)

__all__ = [
    "ArgminLawConfig",
    "ArgminSummary",
    "argmin_abs_quantile",
    "argmin_cdf",
    "argmin_density",
    "ks_distance",
    "ks_to_limit",
    "normalize_change_point_errors",
    "sample_argmin",
    "summarize_argmin",
]
