"""
Signal-plus-white-noise change point model, a fast analogue of the SPDE pipeline.

Main components:
- ToyConfig: drifts, change point, resolution and seed
- toy_simulate: increments dY on a fine x-grid
- toy_estimate_known_theta / toy_estimate_unknown_theta: maximum likelihood change point estimates
- rescaled_errors: errors on the scale of the limit law
"""

from .models import ToyConfig
from .toy import (
    cell_points,
    noise_profile,
    rescaled_errors,
    run_toy_replicates,
    toy_estimate_known_theta,
    toy_estimate_unknown_theta,
    toy_simulate,
)

__all__ = [
    "ToyConfig",
    "cell_points",
    "noise_profile",
    "rescaled_errors",
    "run_toy_replicates",
    "toy_estimate_known_theta",
    "toy_estimate_unknown_theta",
    "toy_simulate",
]
