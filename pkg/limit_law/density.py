"""Closed-form density and distribution function of argmin_h {B(h) + |h|/2}.

f(x) = 3/2 e^{|x|} Phi(-3/2 sqrt|x|) - 1/2 Phi(-1/2 sqrt|x|). Integrating by parts
gives, for x >= 0,

  G(x) = int_0^x f = 3/2 e^x Phi(-3/2 sqrt x) + 5/2 Phi(sqrt x / 2) - 2
         - x/2 Phi(-sqrt x / 2) + sqrt x phi(sqrt x / 2),

and the distribution function is 1/2 + sign(x) G(|x|).
"""

import numpy as np
from scipy.optimize import brentq
from scipy.special import log_ndtr, ndtr
from scipy.stats import norm


def _scaled_tail(x: np.ndarray) -> np.ndarray:
    """e^x Phi(-3/2 sqrt x) without overflow."""
    return np.exp(x + log_ndtr(-1.5 * np.sqrt(x)))


def argmin_density(x):
    """Density of the argmin location."""
    u = np.abs(np.asarray(x, dtype=float))
    value = 1.5 * _scaled_tail(u) - 0.5 * ndtr(-0.5 * np.sqrt(u))
    return float(value) if value.ndim == 0 else value


def _half_mass(u: np.ndarray) -> np.ndarray:
    r = np.sqrt(u)
    return (
        1.5 * _scaled_tail(u)
        + 2.5 * ndtr(0.5 * r)
        - 2.0
        - 0.5 * u * ndtr(-0.5 * r)
        + r * norm.pdf(0.5 * r)
    )


def argmin_cdf(x):
    """P(argmin <= x)."""
    x = np.asarray(x, dtype=float)
    value = 0.5 + np.sign(x) * _half_mass(np.abs(x))
    value = np.clip(value, 0.0, 1.0)
    return float(value) if value.ndim == 0 else value


def argmin_abs_quantile(p: float) -> float:
    """Quantile of |argmin| at level p, e.g. p = 0.5 for the median."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return brentq(lambda u: 2.0 * float(_half_mass(np.array(u))) - p, 0.0, 500.0, xtol=1e-12)
