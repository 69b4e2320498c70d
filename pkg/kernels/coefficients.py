"""Inner products of the rescaled kernels with the eigenfunctions.

a_k = <K_{delta,i}, e_k> and b_k = <Delta K_{delta,i}, e_k> are integrated with
composite Gauss-Legendre panels on the support of K_{delta,i}, split at the
site centre and at tau whenever the change point lies inside the support.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from spectrum.models import DiffusivityProfile, SpectralDecomposition
from spectrum.quadrature import composite_gauss_legendre

from .models import MeasurementGrid, QuadratureNonConvergence, scaled_kernel

logger = logging.getLogger(__name__)

_MODE_CHUNK = 512
_CHECK_MODES = 64


def panel_count(decomp: SpectralDecomposition, grid: MeasurementGrid) -> int:
    """Panels per half-support: max(8, ceil(4 delta sqrt(lambda_M / theta_lo) / pi))."""
    fastest = math.sqrt(float(decomp.eigenvalues[-1]) / decomp.profile.theta_lo)
    return max(8, int(math.ceil(4.0 * grid.delta * fastest / math.pi)))


def _breakpoints(grid: MeasurementGrid, profile: DiffusivityProfile, i: int):
    lo, hi = grid.site_support(i)
    points = [lo, grid.center(i), hi]
    if lo < profile.tau < hi:
        points.append(profile.tau)
    return points


def _project(decomp: SpectralDecomposition, nodes, f_weighted, g_weighted, start: int = 0):
    """Rows start.. of E @ f and E @ g, evaluated in mode chunks to bound memory."""
    m = decomp.mode_count
    a = np.empty(m - start)
    b = np.empty(m - start)
    for lo in range(start, m, _MODE_CHUNK):
        hi = min(lo + _MODE_CHUNK, m)
        basis = decomp.evaluate_all(nodes, modes=hi, start=lo)
        a[lo - start : hi - start] = basis @ f_weighted
        b[lo - start : hi - start] = basis @ g_weighted
    return a, b


def _site_rule(decomp, grid, i, panels, order):
    site = scaled_kernel(grid, i)
    nodes, weights = composite_gauss_legendre(_breakpoints(grid, decomp.profile, i), panels, order)
    return nodes, weights * site.value(nodes), weights * site.laplacian(nodes)


def kernel_eigen_coeffs(
    decomp: SpectralDecomposition,
    grid: MeasurementGrid,
    i: int,
    order: int = 8,
    rtol: float = 1e-8,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectors (a, b) of length decomp.mode_count for site i.

    The fastest modes are recomputed with twice the panels; a disagreement above
    `rtol` relative to the largest coefficient raises QuadratureNonConvergence.
    """
    panels = panel_count(decomp, grid)
    nodes, fw, gw = _site_rule(decomp, grid, i, panels, order)
    a, b = _project(decomp, nodes, fw, gw)

    start = max(0, decomp.mode_count - _CHECK_MODES)
    nodes2, fw2, gw2 = _site_rule(decomp, grid, i, 2 * panels, order)
    a2, b2 = _project(decomp, nodes2, fw2, gw2, start=start)
    err_a = np.max(np.abs(a[start:] - a2)) / max(np.max(np.abs(a)), 1e-300)
    err_b = np.max(np.abs(b[start:] - b2)) / max(np.max(np.abs(b)), 1e-300)
    if max(err_a, err_b) > rtol:
        raise QuadratureNonConvergence(
            f"site {i}: coefficients moved by {max(err_a, err_b):.3g} under panel doubling "
            f"({panels} panels, order {order})"
        )
    return a, b


@dataclass(frozen=True)
class SiteCoefficients:
    """Per-site eigen coefficients stacked as (n, M) arrays."""

    a: np.ndarray
    b: np.ndarray
    grid: MeasurementGrid
    profile: DiffusivityProfile

    @property
    def mode_count(self) -> int:
        return int(self.a.shape[1])

    def truncated(self, mode_count: int) -> "SiteCoefficients":
        return SiteCoefficients(
            a=self.a[:, :mode_count],
            b=self.b[:, :mode_count],
            grid=self.grid,
            profile=self.profile,
        )

    def parseval_defect(self) -> np.ndarray:
        """1 - sum_k a_k^2 per site; the L2 mass of K_{delta,i} beyond the truncation."""
        return 1.0 - np.sum(self.a**2, axis=1)

    def drift_residuals(self, eigenvalues: np.ndarray) -> np.ndarray:
        """max_k |b_k + lambda_k a_k / theta_i| / max_k |b_k| per site.

        Off the change point block Delta K_{delta,i} = theta_i^{-1} Delta_theta K_{delta,i},
        so the residual is quadrature noise there; at k_bullet it is O(1) when eta != 0.
        """
        out = np.empty(self.grid.n)
        for i in range(1, self.grid.n + 1):
            theta = self.grid.block_diffusivity(i, self.profile)
            if theta is None:
                # left diffusivity as reference
                theta = self.profile.theta_minus
            row_a, row_b = self.a[i - 1], self.b[i - 1]
            out[i - 1] = np.max(np.abs(row_b + eigenvalues * row_a / theta)) / np.max(np.abs(row_b))
        return out


def eigen_coefficients_all(decomp: SpectralDecomposition, grid: MeasurementGrid) -> SiteCoefficients:
    """kernel_eigen_coeffs for every site of the grid."""
    a = np.empty((grid.n, decomp.mode_count))
    b = np.empty((grid.n, decomp.mode_count))
    for i in range(1, grid.n + 1):
        a[i - 1], b[i - 1] = kernel_eigen_coeffs(decomp, grid, i)
    logger.info("Computed eigen coefficients for %d sites x %d modes", grid.n, decomp.mode_count)
    return SiteCoefficients(a=a, b=b, grid=grid, profile=decomp.profile)
