"""Closed-form and spectral inverses of Delta_theta applied to a second derivative."""

from typing import Callable, Sequence

import numpy as np

from .models import DiffusivityProfile, SpectralDecomposition
from .quadrature import composite_gauss_legendre


def inverse_apply_second_derivative(profile: DiffusivityProfile, f: Callable, x):
    """The function g with Delta_theta g = f'' and Dirichlet boundary, at x.

    For f in C^2_0((0, 1)) the flux theta g' equals f' + c; the constant c makes
    g vanish at both ends, which produces a linear correction proportional to
    f(tau) on either side of the jump.
    """
    x_arr = np.asarray(x, dtype=float)
    theta_m, theta_p, tau = profile.theta_minus, profile.theta_plus, profile.tau
    jump = (theta_p - theta_m) / (tau * theta_p + (1.0 - tau) * theta_m)
    f_tau = float(f(tau))
    fx = np.asarray(f(x_arr), dtype=float)
    left = (fx - jump * f_tau * x_arr) / theta_m
    right = (fx + jump * f_tau * (1.0 - x_arr)) / theta_p
    value = np.where(x_arr < tau, left, right)
    return float(value) if value.ndim == 0 else value


def spectral_inverse_second_derivative(
    decomp: SpectralDecomposition,
    f_second: Callable,
    x,
    support: Sequence[float] = (0.0, 1.0),
    panels: int = 64,
    order: int = 16,
):
    """Truncated series -sum_k lambda_k^{-1} <f'', e_k> e_k(x).

    Converges to `inverse_apply_second_derivative` as the mode count grows.
    The inner products are integrated over `support` with tau as a breakpoint.
    """
    lo, hi = support
    breaks = [lo, hi] + ([decomp.profile.tau] if lo < decomp.profile.tau < hi else [])
    nodes, weights = composite_gauss_legendre(breaks, panels, order)
    inner = decomp.evaluate_all(nodes) @ (weights * f_second(nodes))
    x_arr = np.asarray(x, dtype=float)
    basis = decomp.evaluate_all(np.atleast_1d(x_arr))
    value = -(inner / decomp.eigenvalues) @ basis
    return float(value[0]) if x_arr.ndim == 0 else value.reshape(x_arr.shape)
