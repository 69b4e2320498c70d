"""Closed-form second moments of the spectral expansion started at zero."""

import numpy as np


def stationary_variance(eigenvalues) -> np.ndarray:
    """1 / (2 lambda_k), the limiting variance of each OU coordinate."""
    return 0.5 / np.asarray(eigenvalues, dtype=float)


def mode_variance(eigenvalues, t: float) -> np.ndarray:
    """Var x_k(t) = (1 - e^{-2 lambda_k t}) / (2 lambda_k)."""
    lam = np.asarray(eigenvalues, dtype=float)
    return -np.expm1(-2.0 * lam * t) / (2.0 * lam)


def expected_second_moment(eigenvalues, a, t: float) -> float:
    """E[X_{delta,i}(t)^2] = sum_k a_k^2 (1 - e^{-2 lambda_k t}) / (2 lambda_k)."""
    a = np.asarray(a, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)[: a.shape[-1]]
    return float(np.sum(a**2 * mode_variance(lam, t)))


def expected_quadratic_variation(eigenvalues, b, horizon: float) -> float:
    """E[I_{delta,i}] = sum_k b_k^2 (T / (2 lambda_k) - (1 - e^{-2 lambda_k T}) / (4 lambda_k^2))."""
    b = np.asarray(b, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)[: b.shape[-1]]
    per_mode = horizon / (2.0 * lam) + np.expm1(-2.0 * lam * horizon) / (4.0 * lam**2)
    return float(np.sum(b**2 * per_mode))


def expected_discrete_quadratic_variation(eigenvalues, b, horizon: float, time_steps: int) -> float:
    """Mean of the trapezoid sum of (X^Delta)^2 on the uniform grid (exact transitions)."""
    b = np.asarray(b, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)[: b.shape[-1]]
    t = np.arange(time_steps + 1) * (horizon / time_steps)
    weights = np.full(time_steps + 1, horizon / time_steps)
    weights[[0, -1]] *= 0.5
    var = -np.expm1(-2.0 * np.outer(lam, t)) / (2.0 * lam[:, None])
    return float(np.sum(b**2 * (var @ weights)))


def expected_drift_integral(eigenvalues, a, b, horizon: float) -> float:
    """E[int_0^T X^Delta dX] = -sum_k lambda_k a_k b_k (T / (2 lambda_k) - (1 - e^{-2 lambda_k T}) / (4 lambda_k^2))."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)[: a.shape[-1]]
    per_mode = horizon / (2.0 * lam) + np.expm1(-2.0 * lam * horizon) / (4.0 * lam**2)
    return float(-np.sum(lam * a * b * per_mode))
