"""Itô sums and quadratic variations of the local measurements."""

import csv
import logging
from pathlib import Path
from typing import Union

import numpy as np
from scipy.integrate import trapezoid

from simulation.io import CONFIG_PREFIX, format_float
from simulation.models import ObservationSet, SimulationScheme

from .models import BlockFunctionals, MissingBrownianPath

logger = logging.getLogger(__name__)


def _increment_sum(obs: ObservationSet) -> np.ndarray:
    return np.sum(obs.laplacian_values[:, :-1] * np.diff(obs.values, axis=1), axis=1)


def compute_functionals(obs: ObservationSet) -> BlockFunctionals:
    """Itô sums A_i, trapezoid and left-point I_{delta,i}, and M_i when available.

    When the drift D_{delta,i} and the Brownian increments come with the
    observations, A_i is the left-point sum of X^Delta against dX = D dt + dB:

        A_i = sum_j XD_j D_j dt + sum_j XD_j dB_j.

    Under Euler steps this is the increment sum sum_j XD_j (X_{j+1} - X_j) up to
    rounding. Under exact OU steps the increment sum only sees the part
    (e^{-lambda_k dt} - 1) x_k of each mode drift, which is far from -lambda_k x_k dt
    once lambda_k dt is of order one, so it is used only as a fallback.
    """
    xd = obs.laplacian_values
    dt = obs.time_step
    left = xd[:, :-1]

    quadratic_variation = trapezoid(xd**2, dx=dt, axis=1)
    quadratic_variation_left = np.sum(left**2, axis=1) * dt
    martingale = np.sum(left * obs.brownian, axis=1) if obs.has_brownian else None
    if obs.has_drift and martingale is not None:
        drift_integral = np.sum(left * obs.drift_values[:, :-1], axis=1) * dt + martingale
    else:
        if obs.config.scheme is SimulationScheme.EXACT:
            logger.warning(
                "Observations carry no drift or Brownian increments; A_i falls back to the increment sum, "
                "biased when lambda_M dt is not small (dt=%.3g)", dt
            )
        drift_integral = _increment_sum(obs)

    grid = obs.config.grid
    return BlockFunctionals(
        drift_integral=drift_integral,
        quadratic_variation=quadratic_variation,
        quadratic_variation_left=quadratic_variation_left,
        martingale=martingale,
        delta=grid.delta,
        k_bullet=grid.k_bullet(obs.config.profile),
    )


def remainder_proxy(obs: ObservationSet, funcs: BlockFunctionals, theta_prime: float) -> float:
    """R_{delta,k_bullet}(theta') = A_k - theta' I_k - M_k at the change point block.

    I_k is the left-point sum so the identity is exact on the simulation grid.
    """
    if not obs.has_brownian or not funcs.has_martingale:
        raise MissingBrownianPath("remainder needs the Brownian increments of the change point block")
    lo, hi = obs.config.profile.band
    if not lo <= theta_prime <= hi:
        raise ValueError(f"theta_prime={theta_prime} outside band [{lo}, {hi}]")
    k = obs.config.grid.k_bullet(obs.config.profile) - 1
    return float(
        funcs.drift_integral[k] - theta_prime * funcs.quadratic_variation_left[k] - funcs.martingale[k]
    )


def export_functionals_csv(funcs: BlockFunctionals, path: Union[str, Path], config_json: str = "{}") -> Path:
    """Per-site rows: site, centre, A, I (trapezoid), I (left), M, is_change_block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = funcs.site_count
    with open(path, "w", newline="") as fh:
        fh.write(CONFIG_PREFIX + config_json + "\n")
        writer = csv.writer(fh)
        writer.writerow(["site", "center", "A", "I", "I_left", "M", "change_block"])
        for i in range(n):
            m = "" if funcs.martingale is None else format_float(funcs.martingale[i])
            writer.writerow(
                [
                    i + 1,
                    format_float((i + 0.5) / n),
                    format_float(funcs.drift_integral[i]),
                    format_float(funcs.quadratic_variation[i]),
                    format_float(funcs.quadratic_variation_left[i]),
                    m,
                    int(funcs.k_bullet == i + 1),
                ]
            )
    logger.info("Wrote functionals for %d sites to %s", n, path)
    return path
