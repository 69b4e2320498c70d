"""Monte Carlo sampler of the argmin law and normalisation of change point errors."""

import logging
from typing import Optional

import numpy as np
from scipy.stats import ks_2samp, kstest

from kernels.models import MeasurementKernel
from simulation.noise import block_generator
from spectrum.models import DiffusivityProfile

from .density import argmin_cdf
from .models import ArgminLawConfig, ArgminSummary

logger = logging.getLogger(__name__)

SUMMARY_PROBABILITIES = (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99)


def _grid_offsets(points: int) -> np.ndarray:
    """Offsets in units of the step, ordered 0, -1, +1, -2, +2, ..."""
    j = np.arange(1, points + 1)
    out = np.zeros(2 * points + 1, dtype=int)
    out[1::2] = -j
    out[2::2] = j
    return out


def sample_argmin(config: ArgminLawConfig) -> np.ndarray:
    """Grid argmin of B(h) + |h|/2 on [-H, H], one per replicate.

    The grid is scanned in the order 0, -dh, +dh, -2dh, ... so ties resolve to
    the smallest |h| and then the smallest h.
    """
    m = config.points_per_side
    dh = config.step
    drift = 0.5 * dh * np.arange(1, m + 1)
    offsets = _grid_offsets(m)
    samples = np.empty(config.replicates)

    for block, start in enumerate(range(0, config.replicates, config.chunk_size)):
        stop = min(start + config.chunk_size, config.replicates)
        z = block_generator(config.seed, 0, block).standard_normal((stop - start, 2, m))
        paths = np.cumsum(np.sqrt(dh) * z, axis=2) + drift
        values = np.zeros((stop - start, 2 * m + 1))
        values[:, 1::2] = paths[:, 0]
        values[:, 2::2] = paths[:, 1]
        samples[start:stop] = offsets[np.argmin(values, axis=1)] * dh

    logger.info("Sampled %d argmin locations (H=%g, dh=%g)", config.replicates, config.half_width, dh)
    return samples


def summarize_argmin(samples) -> ArgminSummary:
    samples = np.asarray(samples, dtype=float)
    r = samples.shape[0]
    quantiles = np.quantile(samples, SUMMARY_PROBABILITIES)
    return ArgminSummary(
        replicates=r,
        mean=float(samples.mean()),
        standard_error=float(samples.std(ddof=1) / np.sqrt(r)) if r > 1 else 0.0,
        median_abs=float(np.median(np.abs(samples))),
        quantiles={repr(p): float(q) for p, q in zip(SUMMARY_PROBABILITIES, quantiles)},
        ks_to_closed_form=ks_to_limit(samples),
    )


def normalize_change_point_errors(
    tau_hats,
    tau: float,
    profile: DiffusivityProfile,
    kernel: MeasurementKernel,
    horizon: float,
    eta: float,
    delta: float,
    theta_star: Optional[float] = None,
) -> np.ndarray:
    """(eta^2 / delta^3) (T |K'|^2 / (2 theta*)) (tau_hat - tau).

    theta* defaults to the midpoint (theta_- + theta_+) / 2 of the profile.
    """
    if eta == 0.0 or delta <= 0.0:
        raise ValueError("normalisation needs eta != 0 and delta > 0")
    if theta_star is None:
        theta_star = 0.5 * (profile.theta_minus + profile.theta_plus)
    scale = eta**2 / delta**3 * horizon * kernel.derivative_norm_sq / (2.0 * theta_star)
    return scale * (np.asarray(tau_hats, dtype=float) - tau)


def ks_distance(samples, reference) -> float:
    """Two-sample Kolmogorov-Smirnov statistic."""
    return float(ks_2samp(np.asarray(samples, dtype=float), np.asarray(reference, dtype=float)).statistic)


def ks_to_limit(samples) -> float:
    """One-sample Kolmogorov-Smirnov statistic against the closed-form argmin CDF."""
    return float(kstest(np.asarray(samples, dtype=float), argmin_cdf).statistic)
