"""CUSUM change point estimator for known diffusivities and its centred trace."""

import logging

import numpy as np

from functionals.models import BlockFunctionals, Quadrature

from .models import CusumResult

logger = logging.getLogger(__name__)


def cusum_objective(
    funcs: BlockFunctionals,
    theta_minus: float,
    theta_plus: float,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
) -> np.ndarray:
    """O(k) = sum_{i<=k} (th- A_i - th-^2/2 I_i) + sum_{i>k} (th+ A_i - th+^2/2 I_i), k = 1..n."""
    a = funcs.drift_integral
    b = funcs.quadratic(quadrature)
    gain_minus = theta_minus * a - 0.5 * theta_minus**2 * b
    gain_plus = theta_plus * a - 0.5 * theta_plus**2 * b
    return np.cumsum(gain_minus) + (np.sum(gain_plus) - np.cumsum(gain_plus))


def estimate_cusum_known_theta(
    funcs: BlockFunctionals,
    theta_minus: float,
    theta_plus: float,
    quadrature: Quadrature = Quadrature.TRAPEZOID,
) -> CusumResult:
    """k_hat = argmax_k O(k) with the smallest index on ties."""
    n = funcs.site_count
    if n < 2:
        raise ValueError(f"need at least 2 sites, got {n}")
    objective = cusum_objective(funcs, theta_minus, theta_plus, quadrature)
    best = int(np.argmax(objective))
    centered = None
    if funcs.k_bullet is not None:
        centered = (objective - objective[funcs.k_bullet - 1]).tolist()
    delta = funcs.delta if funcs.delta is not None else 1.0 / n
    return CusumResult(
        k_hat=best + 1,
        tau_hat=(best + 1) * delta,
        objective=objective.tolist(),
        centered=centered,
    )


def centered_trace(
    funcs: BlockFunctionals,
    theta_minus: float,
    theta_plus: float,
    quadrature: Quadrature = Quadrature.LEFT,
) -> np.ndarray:
    """Z_k built from martingales, quadratic variations and the remainder.

    With eta = th+ - th- and R = A_kb - th- I_kb - M_kb:
      k < kb:  eta sum_{k<i<=kb} M_i - eta^2/2 sum_{k<i<=kb} I_i + eta R
      k = kb:  0
      k > kb:  -eta sum_{kb<i<=k} M_i - eta^2/2 sum_{kb<i<=k} I_i
    """
    m = funcs.require_martingale()
    if funcs.k_bullet is None:
        raise ValueError("centred trace needs the change point block of the data")
    b = funcs.quadratic(quadrature)
    n = funcs.site_count
    kb = funcs.k_bullet
    eta = theta_plus - theta_minus
    remainder = funcs.drift_integral[kb - 1] - theta_minus * b[kb - 1] - m[kb - 1]

    step = np.empty(n)
    step[:kb] = eta * m[:kb] - 0.5 * eta**2 * b[:kb]
    step[kb:] = -eta * m[kb:] - 0.5 * eta**2 * b[kb:]

    z = np.zeros(n)
    # k < kb: suffix sums over (k, kb]
    left = np.cumsum(step[:kb][::-1])[::-1]
    z[: kb - 1] = left[1:] + eta * remainder
    # k > kb: prefix sums over (kb, k]
    z[kb:] = np.cumsum(step[kb:])

    direct = estimate_cusum_known_theta(funcs, theta_minus, theta_plus, quadrature)
    if int(np.argmax(z)) + 1 != direct.k_hat:
        logger.warning(
            "Centred trace argmax %d differs from CUSUM argmax %d", int(np.argmax(z)) + 1, direct.k_hat
        )
    return z
