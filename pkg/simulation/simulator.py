"""Spectral simulation of the stochastic heat equation and its local measurements.

The solution is expanded in the eigenbasis of -Delta_theta; each coordinate is an
OU process started at zero. Local measurements are linear functionals of the
coordinates through the per-site kernel coefficients; the drift of X_{delta,i},
D_{delta,i} = sum_k -lambda_k a_k x_k, is assembled the same way.
"""

import logging
from typing import Iterator, Tuple

import numpy as np

from kernels.coefficients import SiteCoefficients
from spectrum.models import SpectralDecomposition

from .models import ObservationSet, SimulationConfig, SimulationError, SimulationScheme
from .noise import block_normals, joint_increments, transition_moments

logger = logging.getLogger(__name__)


def _blocks(config: SimulationConfig) -> Iterator[Tuple[int, int]]:
    for start in range(0, config.time_steps, config.chunk_steps):
        yield start, min(start + config.chunk_steps, config.time_steps)


def _check_inputs(config: SimulationConfig, decomp: SpectralDecomposition, coeffs: SiteCoefficients) -> None:
    m = config.mode_count
    if decomp.mode_count < m:
        raise SimulationError(f"decomposition has {decomp.mode_count} modes, config needs {m}")
    if coeffs.mode_count < m:
        raise SimulationError(f"coefficients cover {coeffs.mode_count} modes, config needs {m}")
    if decomp.profile != config.profile or coeffs.profile != config.profile:
        raise SimulationError("decomposition, coefficients and config disagree on the profile")
    if coeffs.grid.n != config.grid.n:
        raise SimulationError(f"coefficients are for n={coeffs.grid.n}, config has n={config.grid.n}")


def simulate(
    config: SimulationConfig,
    decomp: SpectralDecomposition,
    coeffs: SiteCoefficients,
) -> ObservationSet:
    """Sample X_{delta,i} and X^Delta_{delta,i} on the uniform time grid.

    Args:
        config: Horizon, resolution, seed and scheme
        decomp: Eigenpairs with at least config.mode_count modes
        coeffs: Per-site eigen coefficients consistent with decomp and config.grid

    Returns:
        ObservationSet with zero initial values, the drift of every site and, if
        requested, the Brownian increments of every site driven by the same noise.
    """
    _check_inputs(config, decomp, coeffs)
    m = config.mode_count
    n = config.grid.n
    dt = config.time_step
    lam = decomp.eigenvalues[:m]
    a = coeffs.a[:, :m]
    b = coeffs.b[:, :m]
    d = -a * lam

    euler = config.scheme is SimulationScheme.EULER
    if euler and lam[-1] * dt >= 2.0:
        raise SimulationError(f"Euler step unstable: lambda_M * dt = {lam[-1] * dt:.4g} >= 2")
    decay, v, c = transition_moments(lam, dt)

    values = np.zeros((n, config.time_steps + 1))
    laplacian_values = np.zeros((n, config.time_steps + 1))
    drift_values = np.zeros((n, config.time_steps + 1))
    brownian = np.empty((n, config.time_steps)) if config.export_brownian else None

    state = np.zeros(m)
    for start, stop in _blocks(config):
        z1, z2 = block_normals(config.seed, config.stream, start, stop - start, m)
        dw, xi = joint_increments(z1, z2, v, c, dt)
        path = np.empty((stop - start, m))
        for j in range(stop - start):
            if euler:
                state = state - lam * state * dt + dw[j]
            else:
                state = decay * state + xi[j]
            path[j] = state
        values[:, start + 1 : stop + 1] = a @ path.T
        laplacian_values[:, start + 1 : stop + 1] = b @ path.T
        drift_values[:, start + 1 : stop + 1] = d @ path.T
        if brownian is not None:
            brownian[:, start:stop] = a @ dw.T

    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(laplacian_values))):
        raise SimulationError("non-finite values in simulated observations")
    logger.debug("Simulated n=%d, M=%d, N_t=%d (seed=%d, stream=%d)", n, m, config.time_steps, config.seed, config.stream)
    return ObservationSet(
        times=config.times,
        values=values,
        laplacian_values=laplacian_values,
        config=config,
        drift_values=drift_values,
        brownian=brownian,
    )


def brownian_increments_for_site(config: SimulationConfig, coeffs: SiteCoefficients, i: int) -> np.ndarray:
    """Increments of B_{delta,i} = sum_k a_k W_k over each time step.

    Regenerated from the same per-mode counter lanes that drive `simulate`, so they are
    the increments of the noise behind any path simulated with `config`.
    """
    config.grid.site_support(i)  # validates i
    a = coeffs.a[i - 1, : config.mode_count]
    dt = config.time_step
    out = np.empty(config.time_steps)
    for start, stop in _blocks(config):
        z1, _ = block_normals(config.seed, config.stream, start, stop - start, config.mode_count)
        out[start:stop] = (np.sqrt(dt) * z1) @ a
    return out
