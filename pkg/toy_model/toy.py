"""Simulation and maximum likelihood estimation in the white-noise change point model."""

import logging
from typing import Callable, Optional, Tuple

import numpy as np
from tqdm import tqdm

from simulation.noise import block_generator

from .models import ToyConfig

logger = logging.getLogger(__name__)

SigmaFunction = Callable[[np.ndarray], np.ndarray]


def cell_points(config: ToyConfig) -> np.ndarray:
    """Left end points x_j = j / n_x of the cells."""
    return np.arange(config.grid_points) * config.dx


def noise_profile(config: ToyConfig, sigma_function: Optional[SigmaFunction] = None) -> np.ndarray:
    x = cell_points(config)
    if sigma_function is None:
        return np.full(x.shape, config.noise_level)
    sigma = np.asarray(sigma_function(x), dtype=float)
    if np.any(sigma <= 0.0):
        raise ValueError("sigma(x) must be positive")
    return sigma


def toy_simulate(
    config: ToyConfig,
    replicate: int = 0,
    sigma_function: Optional[SigmaFunction] = None,
) -> np.ndarray:
    """Increments dY_j = theta(x_j) dx + sigma(x_j) sqrt(dx) N(0, 1)."""
    x = cell_points(config)
    theta = np.where(x < config.tau, config.theta_minus, config.theta_plus)
    sigma = noise_profile(config, sigma_function)
    z = block_generator(config.seed, replicate, 0).standard_normal(config.grid_points)
    return theta * config.dx + sigma * np.sqrt(config.dx) * z


def _weighted_sums(dy: np.ndarray, weights: Optional[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Prefix sums S(m) = sum_{j<m} w_j dY_j and W(m) = sum_{j<m} w_j dx for m = 0..n_x."""
    dy = np.asarray(dy, dtype=float)
    w = np.ones_like(dy) if weights is None else np.asarray(weights, dtype=float)
    dx = 1.0 / dy.shape[0]
    s = np.concatenate([[0.0], np.cumsum(w * dy)])
    wsum = np.concatenate([[0.0], np.cumsum(w * dx)])
    return s, wsum


def toy_estimate_known_theta(
    dy: np.ndarray,
    theta_minus: float,
    theta_plus: float,
    weights: Optional[np.ndarray] = None,
) -> float:
    """argmax over tau = m / n_x of the known-drift log-likelihood; smallest m on ties.

    `weights` are sigma(x_j)^{-2}; they only matter for heteroskedastic noise.
    """
    if theta_plus == theta_minus:
        raise ValueError("known-drift estimator needs theta_plus != theta_minus")
    s, w = _weighted_sums(dy, weights)
    objective = (
        theta_minus * s
        - 0.5 * theta_minus**2 * w
        + theta_plus * (s[-1] - s)
        - 0.5 * theta_plus**2 * (w[-1] - w)
    )
    return int(np.argmax(objective)) / (s.shape[0] - 1)


def toy_estimate_unknown_theta(dy: np.ndarray, weights: Optional[np.ndarray] = None) -> Tuple[float, float, float]:
    """Full maximum likelihood (theta_-, theta_+, tau) from the squared-ratio profile."""
    s, w = _weighted_sums(dy, weights)
    m = np.arange(1, s.shape[0] - 1)
    left = s[m] ** 2 / w[m]
    right = (s[-1] - s[m]) ** 2 / (w[-1] - w[m])
    best = int(m[np.argmax(left + right)])
    theta_minus = s[best] / w[best]
    theta_plus = (s[-1] - s[best]) / (w[-1] - w[best])
    return float(theta_minus), float(theta_plus), best / (s.shape[0] - 1)


def rescaled_errors(tau_hats, tau: float, eta: float, sigma: float) -> np.ndarray:
    """(eta^2 / sigma^2)(tau_hat - tau), which is eta^2 delta^{-2} n (tau_hat - tau) for sigma = n^{-3/2}."""
    return (eta**2 / sigma**2) * (np.asarray(tau_hats, dtype=float) - tau)


def run_toy_replicates(config: ToyConfig, replicates: int, show_progress: bool = False) -> np.ndarray:
    """Known-drift change point estimates for replicates 0..R-1 of `config`."""
    tau_hats = np.empty(replicates)
    for r in tqdm(range(replicates), desc="toy replicates", disable=not show_progress):
        dy = toy_simulate(config, replicate=r)
        tau_hats[r] = toy_estimate_known_theta(dy, config.theta_minus, config.theta_plus)
    logger.info("Finished %d toy replicates (n=%d, n_x=%d)", replicates, config.n, config.grid_points)
    return tau_hats
