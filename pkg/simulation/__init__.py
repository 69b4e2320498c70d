"""
Exact spectral simulation of the stochastic heat equation and its local measurements.

Main components:
- SimulationConfig / ObservationSet: reproducible run description and sampled paths
- simulate: OU coordinates in the eigenbasis projected onto the kernels, with the drift of each site
- noise: Philox normals keyed by (seed, stream, mode, step)
- brownian_increments_for_site: increments of B_{delta,i} from the same noise
- moments: closed-form second moments used as test oracles
- io: CSV / NPZ dumps of observation sets
"""

from .models import ObservationSet, SimulationConfig, SimulationError, SimulationScheme
from .noise import (
    block_generator,
    block_normals,
    joint_increments,
    mode_normals,
    transition_covariance,
    transition_moments,
)
from .simulator import brownian_increments_for_site, simulate
from .moments import (
    expected_discrete_quadratic_variation,
    expected_drift_integral,
    expected_quadratic_variation,
    expected_second_moment,
    mode_variance,
    stationary_variance,
)
from .io import dump_observations, format_float, load_observations

__all__ = [
    "ObservationSet",
    "SimulationConfig",
    "SimulationError",
    "SimulationScheme",
    "block_generator",
    "block_normals",
    "joint_increments",
    "mode_normals",
    "transition_covariance",
    "transition_moments",
    "brownian_increments_for_site",
    "simulate",
    "expected_discrete_quadratic_variation",
    "expected_drift_integral",
    "expected_quadratic_variation",
    "expected_second_moment",
    "mode_variance",
    "stationary_variance",
    "dump_observations",
    "format_float",
    "load_observations",
]
