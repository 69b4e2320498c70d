"""Semi-analytic eigen-decomposition of the Dirichlet operator -d/dx theta d/dx.

On each side of the jump an eigenfunction is a pure sine vanishing at the
respective boundary; matching value and flux at tau leaves a scalar root
problem in lambda, solved here by a sign-change scan followed by Brent's method.
"""

import logging
import math
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from .models import (
    BracketingFailure,
    DiffusivityProfile,
    IndexOutOfRange,
    SpectralDecomposition,
)

logger = logging.getLogger(__name__)

_INTERLACING_SLACK = 1e-6
_REFINE_POINTS = 257
_POLISH_POINTS = 4097


def characteristic_value(lam, profile: DiffusivityProfile):
    """F(lambda) = th- w- cos(w- tau) sin(w+(1-tau)) + th+ w+ cos(w+(1-tau)) sin(w- tau)."""
    lam = np.asarray(lam, dtype=float)
    wm = np.sqrt(lam / profile.theta_minus)
    wp = np.sqrt(lam / profile.theta_plus)
    a = wm * profile.tau
    b = wp * (1.0 - profile.tau)
    value = profile.theta_minus * wm * np.cos(a) * np.sin(b) + profile.theta_plus * wp * np.cos(b) * np.sin(a)
    return float(value) if value.ndim == 0 else value


def _scaled_characteristic(s, profile: DiffusivityProfile):
    """F(s^2) / s, a bounded trigonometric function of the frequency s = sqrt(lambda)."""
    a = s * profile.tau / math.sqrt(profile.theta_minus)
    b = s * (1.0 - profile.tau) / math.sqrt(profile.theta_plus)
    return math.sqrt(profile.theta_minus) * np.cos(a) * np.sin(b) + math.sqrt(profile.theta_plus) * np.cos(b) * np.sin(a)


def comparison_bounds(profile: DiffusivityProfile, k: int) -> Tuple[float, float]:
    """Operator comparison interval [theta_lo pi^2 k^2, theta_hi pi^2 k^2] for lambda_k."""
    base = math.pi**2 * k**2
    return profile.theta_lo * base, profile.theta_hi * base


def mode_amplitudes(eigenvalues: np.ndarray, profile: DiffusivityProfile) -> Tuple[np.ndarray, np.ndarray]:
    """Normalised amplitudes (A_k, B_k) of the matched sine ansatz.

    Two proportional solutions of the matching system exist at a root; the one
    whose entries are bounded away from zero is kept. Normalisation uses the
    closed-form integrals of sin^2 and the sign is fixed by e_k'(0) > 0.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    tau = profile.tau
    wm = np.sqrt(lam / profile.theta_minus)
    wp = np.sqrt(lam / profile.theta_plus)
    sm, cm = np.sin(wm * tau), np.cos(wm * tau)
    sp, cp = np.sin(wp * (1.0 - tau)), np.cos(wp * (1.0 - tau))

    use_sines = np.minimum(np.abs(sm), np.abs(sp)) >= np.minimum(np.abs(cm), np.abs(cp))
    amp_left = np.where(use_sines, sp, profile.theta_plus * wp * cp)
    amp_right = np.where(use_sines, sm, -profile.theta_minus * wm * cm)

    left_sq = tau / 2.0 - np.sin(2.0 * wm * tau) / (4.0 * wm)
    right_sq = (1.0 - tau) / 2.0 - np.sin(2.0 * wp * (1.0 - tau)) / (4.0 * wp)
    norm = np.sqrt(amp_left**2 * left_sq + amp_right**2 * right_sq)
    sign = np.where(amp_left < 0.0, -1.0, 1.0)
    return sign * amp_left / norm, sign * amp_right / norm


def _scan_roots(profile: DiffusivityProfile, mode_count: int, tol: float, oversample: int) -> Tuple[List[float], List[float]]:
    """Frequencies s_k of the first roots, plus the centres of unresolved near-tangent cells."""
    sqrt_minus = math.sqrt(profile.theta_minus)
    sqrt_plus = math.sqrt(profile.theta_plus)
    length = profile.tau / sqrt_minus + (1.0 - profile.tau) / sqrt_plus
    step = math.pi / (length * oversample)
    s_max = math.pi * max(sqrt_minus, sqrt_plus) * mode_count * (1.0 + 1e-9) + 2.0 * step

    s = np.arange(1, int(math.ceil(s_max / step)) + 1, dtype=float) * step
    g = _scaled_characteristic(s, profile)
    rtol = max(tol / 2.0, 4.0 * np.finfo(float).eps)

    def solve(lo: float, hi: float) -> float:
        return brentq(_scaled_characteristic, lo, hi, args=(profile,), xtol=1e-14, rtol=rtol)

    roots = list(s[g == 0.0])
    crossing = np.nonzero(g[:-1] * g[1:] < 0.0)[0]
    roots.extend(solve(s[j], s[j + 1]) for j in crossing)

    # A pair of roots closer than one scan step leaves a shallow, sign-preserving dip.
    amplitude = sqrt_minus + sqrt_plus
    tangency = amplitude * (math.pi / oversample) ** 2
    absg = np.abs(g)
    dips = np.nonzero(
        (absg[1:-1] <= absg[:-2])
        & (absg[1:-1] <= absg[2:])
        & (g[:-2] * g[2:] > 0.0)
        & (g[:-2] * g[1:-1] > 0.0)
        & (absg[1:-1] < tangency)
    )[0] + 1

    unresolved: List[float] = []
    for j in dips:
        fine = np.linspace(s[j - 1], s[j + 1], _REFINE_POINTS)
        gf = _scaled_characteristic(fine, profile)
        fine_crossing = np.nonzero(gf[:-1] * gf[1:] < 0.0)[0]
        if fine_crossing.size:
            roots.extend(solve(fine[m], fine[m + 1]) for m in fine_crossing)
        elif np.min(np.abs(gf)) < tangency * 1e-4:
            unresolved.append(float(s[j]))
    roots = sorted(roots)
    deduped: List[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-13 * r:
            deduped.append(r)
    return deduped, unresolved


def polish_eigenvalue(profile: DiffusivityProfile, value: float, radius: float, rtol: float = 1e-12) -> float:
    """Nearest root of the characteristic function within `radius` (in sqrt(lambda)) of `value`.

    Returns `value` unchanged, with a warning carrying |F(value)|, when no sign
    change can be bracketed on the local grid.
    """
    s0 = math.sqrt(value)
    fine = np.linspace(max(s0 - radius, 0.5 * s0), s0 + radius, _POLISH_POINTS)
    g = _scaled_characteristic(fine, profile)
    exact = np.nonzero(g == 0.0)[0]
    if exact.size:
        return float(fine[exact[np.argmin(np.abs(fine[exact] - s0))]] ** 2)
    crossing = np.nonzero(g[:-1] * g[1:] < 0.0)[0]
    if not crossing.size:
        logger.warning(
            "FEM eigenvalue %.12g kept unpolished: |F| = %.3g", value, abs(characteristic_value(value, profile))
        )
        return value
    j = crossing[np.argmin(np.abs(0.5 * (fine[crossing] + fine[crossing + 1]) - s0))]
    root = brentq(_scaled_characteristic, fine[j], fine[j + 1], args=(profile,), xtol=1e-14, rtol=rtol)
    return root * root


def _fem_cluster(profile: DiffusivityProfile, centre: float, width: float, rtol: float) -> List[float]:
    """Eigenvalues of the FEM oracle inside a near-tangent cell of the scan, polished where possible."""
    from .fem_oracle import fem_eigenvalues_near

    lam_centre = centre**2
    estimate = centre / (math.pi * math.sqrt(min(profile.theta_minus, profile.theta_plus)))
    cells = max(10_000, int(40 * estimate))
    values = fem_eigenvalues_near(profile, cells, sigma=lam_centre, count=4)
    lo, hi = (centre - width) ** 2, (centre + width) ** 2
    raw = [float(v) for v in values if lo <= v <= hi]
    polished = [polish_eigenvalue(profile, v, width / 8.0, rtol) for v in raw]
    if len(set(polished)) < len(polished):
        # two FEM values snapped onto one root
        logger.warning("Polishing merged FEM eigenvalues near lambda~%.6g; keeping the FEM values", lam_centre)
        return raw
    return polished


def decompose(
    profile: DiffusivityProfile,
    mode_count: int,
    tol: float = 1e-12,
    oversample: int = 32,
) -> SpectralDecomposition:
    """First `mode_count` eigenpairs of -Delta_theta in ascending order."""
    if mode_count < 1:
        raise ValueError(f"mode_count must be >= 1, got {mode_count}")
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    roots, unresolved = _scan_roots(profile, mode_count, tol, oversample)
    eigenvalues = [r * r for r in roots]
    fem_values: List[float] = []
    if unresolved:
        length = profile.tau / math.sqrt(profile.theta_minus) + (1.0 - profile.tau) / math.sqrt(profile.theta_plus)
        width = math.pi / (length * oversample)
        for centre in unresolved:
            cluster = _fem_cluster(profile, centre, width, max(tol / 2.0, 4.0 * np.finfo(float).eps))
            logger.warning(
                "Near-tangent root cluster at lambda~%.6g resolved by FEM oracle (%d values)",
                centre**2,
                len(cluster),
            )
            fem_values.extend(cluster)
        eigenvalues = sorted(eigenvalues + fem_values)

    if len(eigenvalues) < mode_count:
        raise BracketingFailure(
            f"isolated {len(eigenvalues)} of {mode_count} eigenvalues for {profile!r}"
        )
    lam = np.asarray(eigenvalues[:mode_count])

    k = np.arange(1, mode_count + 1, dtype=float)
    theta_min = min(profile.theta_minus, profile.theta_plus)
    theta_max = max(profile.theta_minus, profile.theta_plus)
    lower = theta_min * math.pi**2 * k**2 * (1.0 - _INTERLACING_SLACK)
    upper = theta_max * math.pi**2 * k**2 * (1.0 + _INTERLACING_SLACK)
    bad = np.nonzero((lam < lower) | (lam > upper))[0]
    if bad.size:
        raise BracketingFailure(
            f"eigenvalue {bad[0] + 1} = {lam[bad[0]]:.6g} violates comparison bounds "
            f"[{lower[bad[0]]:.6g}, {upper[bad[0]]:.6g}]; a root was skipped"
        )

    amp_left, amp_right = mode_amplitudes(lam, profile)
    fem_modes = tuple(int(i) + 1 for i, v in enumerate(lam) if float(v) in fem_values)
    logger.info("Decomposed %r into %d modes (lambda_max=%.6g)", profile, mode_count, lam[-1])
    return SpectralDecomposition(
        eigenvalues=lam,
        amp_left=amp_left,
        amp_right=amp_right,
        profile=profile,
        fem_modes=fem_modes,
    )


def evaluate_eigenfunction(decomp: SpectralDecomposition, k: int, x):
    """Value of e_k at x (scalar or array)."""
    if not 1 <= k <= decomp.mode_count:
        raise IndexOutOfRange(f"mode {k} not in [1, {decomp.mode_count}]")
    x_arr = np.asarray(x, dtype=float)
    values = decomp.evaluate_all(np.atleast_1d(x_arr), modes=k)[k - 1]
    return float(values[0]) if x_arr.ndim == 0 else values.reshape(x_arr.shape)


def lambda_lower_bound(profile: DiffusivityProfile) -> float:
    """Smallest eigenvalue of -Delta_theta."""
    return float(decompose(profile, 1).eigenvalues[0])
