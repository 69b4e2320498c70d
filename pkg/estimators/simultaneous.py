"""Simultaneous M-estimator of both diffusivities, the nuisance and the change point block.

For fixed k the modified log-likelihood separates into three groups (sites left
of k, the block k itself, sites right of k), each of the form
theta * a - theta^2 / 2 * b. Its maximiser over the band is clip(a / b), so the
profile over k is available in closed form from prefix sums.
"""

import logging
from typing import Tuple

import numpy as np

from functionals.models import BlockFunctionals, Quadrature

from .models import DegenerateBlock, EstimateResult

logger = logging.getLogger(__name__)


def clip_to_band(value, band: Tuple[float, float]):
    lo, hi = band
    return np.clip(value, lo, hi)


def group_maximum(a, b, band: Tuple[float, float]):
    """(theta, value) maximising theta a - theta^2 b / 2 over the band for each group.

    Empty groups (b == 0) contribute 0 and take the band midpoint.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    empty = b == 0.0
    safe_b = np.where(empty, 1.0, b)
    theta = np.where(empty, 0.5 * (band[0] + band[1]), clip_to_band(a / safe_b, band))
    value = np.where(empty, 0.0, theta * a - 0.5 * theta**2 * b)
    return theta, value


def _checked(funcs: BlockFunctionals, quadrature: Quadrature) -> Tuple[np.ndarray, np.ndarray]:
    a = funcs.drift_integral
    b = funcs.quadratic(quadrature)
    bad = np.nonzero(~(b > 0.0))[0]
    if bad.size:
        raise DegenerateBlock(f"quadratic variation of site {bad[0] + 1} is {b[bad[0]]!r}")
    return a, b


def estimate_simultaneous(
    funcs: BlockFunctionals,
    band: Tuple[float, float],
    merge_circ: bool = False,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
) -> EstimateResult:
    """Maximise the profile likelihood L(k) over k in [n].

    Args:
        funcs: Per-site A_i and I_{delta,i}
        band: Admissible diffusivity band (theta_lo, theta_hi)
        merge_circ: Drop the nuisance and count block k on the + side
        quadrature: Which quadratic variation to use

    Returns:
        EstimateResult with the profile trace over all k
    """
    n = funcs.site_count
    if n < 3:
        raise ValueError(f"need at least 3 sites, got {n}")
    a, b = _checked(funcs, quadrature)

    cum_a = np.concatenate([[0.0], np.cumsum(a)])
    cum_b = np.concatenate([[0.0], np.cumsum(b)])
    k = np.arange(1, n + 1)

    theta_minus, value_minus = group_maximum(cum_a[k - 1], cum_b[k - 1], band)
    if merge_circ:
        theta_plus, value_plus = group_maximum(cum_a[n] - cum_a[k - 1], cum_b[n] - cum_b[k - 1], band)
        theta_circ, value_circ = theta_plus, np.zeros(n)
    else:
        theta_plus, value_plus = group_maximum(cum_a[n] - cum_a[k], cum_b[n] - cum_b[k], band)
        theta_circ, value_circ = group_maximum(a, b, band)

    profile = value_minus + value_circ + value_plus
    best = int(np.argmax(profile))
    delta = funcs.delta if funcs.delta is not None else 1.0 / n
    return EstimateResult(
        theta_minus_hat=float(theta_minus[best]),
        theta_plus_hat=float(theta_plus[best]),
        theta_circ_hat=float(theta_circ[best]),
        k_hat=best + 1,
        tau_hat=(best + 1) * delta,
        profile=profile.tolist(),
        merged_circ=merge_circ,
    )


def profile_objective(
    funcs: BlockFunctionals,
    theta_minus: float,
    theta_plus: float,
    theta_circ: float,
    k: int,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
) -> float:
    """sum_i theta_i(k) A_i - theta_i(k)^2 / 2 I_i for a single parameter point."""
    n = funcs.site_count
    if not 1 <= k <= n:
        raise ValueError(f"k={k} not in [1, {n}]")
    theta = np.full(n, theta_plus)
    theta[: k - 1] = theta_minus
    theta[k - 1] = theta_circ
    b = funcs.quadratic(quadrature)
    return float(np.sum(theta * funcs.drift_integral - 0.5 * theta**2 * b))
