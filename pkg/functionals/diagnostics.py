"""Moment bands, concentration bounds and remainder diagnostics for the functionals."""

import logging
import math
from typing import Optional

import numpy as np

from kernels.coefficients import SiteCoefficients
from kernels.models import MeasurementGrid, MeasurementKernel
from simulation.moments import expected_drift_integral, expected_quadratic_variation
from spectrum.models import DiffusivityProfile, SpectralDecomposition

from .models import QvBands, TailDiagnostic

logger = logging.getLogger(__name__)

MIN_TAIL_REPLICATES = 200


def expected_qv_bands(
    profile: DiffusivityProfile,
    kernel: MeasurementKernel,
    horizon: float,
    delta: float,
    lambda_lower: Optional[float] = None,
) -> QvBands:
    """Bands for E[I_{delta,i}] off the change point block and at it.

    Off the block E[I_i] = T/(2 theta_i) |K'|^2 delta^{-2} + C with
    C in [-1/(4 theta_lo^2), 0]. At k_bullet the leading band is
    [T/(2 theta_hi), T/(2 theta_lo)] |K'|^2 delta^{-2}; the exact lower end
    uses the smallest eigenvalue `lambda_lower` (pi^2 theta_lo when omitted).
    """
    lo, hi = profile.band
    scale = kernel.derivative_norm_sq / delta**2
    slack = 1.0 / (4.0 * lo**2)

    def off(theta: float):
        centre = horizon / (2.0 * theta) * scale
        return (centre - slack, centre)

    lam = math.pi**2 * lo if lambda_lower is None else lambda_lower
    exact_lower = (2.0 * lam * horizon - 1.0 + math.exp(-2.0 * lam * horizon)) / (4.0 * lam * hi) * scale
    return QvBands(
        off_block_minus=off(profile.theta_minus),
        off_block_plus=off(profile.theta_plus),
        change_block=(horizon / (2.0 * hi) * scale, horizon / (2.0 * lo) * scale),
        change_block_exact=(exact_lower, horizon / (2.0 * lo) * scale),
    )


def variance_bound(alpha, profile: DiffusivityProfile, kernel: MeasurementKernel, horizon: float, delta: float) -> float:
    """Upper bound T/(2 theta_lo^3) delta^{-2} |alpha|_2^2 |K'|^2 on Var(sum alpha_i I_i)."""
    alpha = np.asarray(alpha, dtype=float)
    lo = profile.theta_lo
    return horizon / (2.0 * lo**3) / delta**2 * float(alpha @ alpha) * kernel.derivative_norm_sq


def bernstein_bound(
    alpha,
    z: float,
    theta_lo: float,
    horizon: float,
    derivative_norm_sq: float,
    delta: float,
) -> float:
    """2 exp(-(theta_lo^2 / (2 |alpha|_inf)) z^2 / (2 z + |alpha|_1 T theta_lo^{-1} |K'|^2 delta^{-2})), clipped at 1."""
    alpha = np.asarray(alpha, dtype=float)
    sup = float(np.max(np.abs(alpha)))
    l1 = float(np.sum(np.abs(alpha)))
    denominator = 2.0 * z + l1 * horizon / theta_lo * derivative_norm_sq / delta**2
    exponent = -(theta_lo**2 / (2.0 * sup)) * z**2 / denominator
    return min(1.0, 2.0 * math.exp(exponent))


def tail_diagnostic(
    quadratic_variations,
    alpha,
    z: float,
    profile: DiffusivityProfile,
    grid: MeasurementGrid,
    horizon: float,
) -> TailDiagnostic:
    """Empirical P(|sum alpha_i (I_i - mean)| >= z) next to the Bernstein bound.

    Args:
        quadratic_variations: (replicates, n) array of I_{delta,i}
        alpha: Non-negative weights with alpha at k_bullet equal to zero
        z: Positive deviation threshold
        profile: Diffusivity used for the simulation
        grid: Measurement grid of the simulation
        horizon: Observation horizon T
    """
    qv = np.asarray(quadratic_variations, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if qv.ndim != 2 or qv.shape[0] < MIN_TAIL_REPLICATES:
        raise ValueError(f"need at least {MIN_TAIL_REPLICATES} replicates, got shape {qv.shape}")
    if alpha.shape != (qv.shape[1],) or np.any(alpha < 0.0) or not np.any(alpha > 0.0):
        raise ValueError("alpha must be a non-negative, non-zero weight per site")
    if alpha[grid.k_bullet(profile) - 1] != 0.0:
        raise ValueError("alpha must vanish at the change point block")
    if z <= 0.0:
        raise ValueError(f"z must be positive, got {z}")

    sums = qv @ alpha
    deviations = np.abs(sums - sums.mean())
    p = float(np.mean(deviations >= z))
    r = qv.shape[0]
    bound = bernstein_bound(alpha, z, profile.theta_lo, horizon, grid.kernel.derivative_norm_sq, grid.delta)
    result = TailDiagnostic(
        z=z,
        empirical=p,
        standard_error=math.sqrt(p * (1.0 - p) / r),
        bound=bound,
        replicates=r,
    )
    if not result.respected:
        logger.warning("Tail probability %.4f exceeds Bernstein bound %.4f at z=%.4g", p, bound, z)
    return result


def remainder_bound_minus(profile: DiffusivityProfile, kernel: MeasurementKernel, horizon: float, delta: float) -> float:
    """Bound T/(sqrt 2 theta_lo) |K'|^2 |eta| delta^{-2} on E|R(theta_minus)|."""
    return horizon / (math.sqrt(2.0) * profile.theta_lo) * kernel.derivative_norm_sq * abs(profile.eta) / delta**2


def search_theta_circ(drift_integrals, quadratic_variations, band) -> float:
    """theta' in the band making the empirical mean of R(theta') closest to zero.

    The mean of A - theta' I - M is affine in theta' and M is centred, so the
    minimiser of its absolute value is the ratio of means clipped to the band.
    """
    a = float(np.mean(drift_integrals))
    b = float(np.mean(quadratic_variations))
    lo, hi = band
    if b <= 0.0:
        raise ValueError("mean quadratic variation must be positive")
    return float(np.clip(a / b, lo, hi))


def theta_circ_reference(decomp: SpectralDecomposition, coeffs: SiteCoefficients, horizon: float) -> float:
    """Value of theta' with E[R(theta')] = 0 at the change point block, from closed-form moments."""
    k = coeffs.grid.k_bullet(coeffs.profile) - 1
    m = coeffs.mode_count
    lam = decomp.eigenvalues[:m]
    mean_a = expected_drift_integral(lam, coeffs.a[k], coeffs.b[k], horizon)
    mean_b = expected_quadratic_variation(lam, coeffs.b[k], horizon)
    return float(np.clip(mean_a / mean_b, *coeffs.profile.band))
