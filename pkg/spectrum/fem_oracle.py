"""Independent P1 finite element discretisation of the Dirichlet form.

The stiffness matrix of E_theta(u, v) = int theta u' v' and the consistent mass
matrix are both tridiagonal on a uniform mesh; their generalised eigenpairs are
computed with shift-invert Lanczos.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.sparse import diags
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .models import DiffusivityProfile, FemSpectrum, SingularMatrix

logger = logging.getLogger(__name__)


def _element_diffusivity(profile: DiffusivityProfile, cells: int) -> np.ndarray:
    """Exact cell averages of theta (the cell holding tau gets the mixed value)."""
    edges = np.linspace(0.0, 1.0, cells + 1)
    left, right = edges[:-1], edges[1:]
    width = right - left
    share_minus = np.clip(profile.tau - left, 0.0, width)
    return (profile.theta_minus * share_minus + profile.theta_plus * (width - share_minus)) / width


def assemble(profile: DiffusivityProfile, cells: int):
    """Interior-node stiffness and mass matrices (sparse, symmetric tridiagonal)."""
    h = 1.0 / cells
    theta_e = _element_diffusivity(profile, cells)
    stiff_diag = (theta_e[:-1] + theta_e[1:]) / h
    stiff_off = -theta_e[1:-1] / h
    n = cells - 1
    stiffness = diags([stiff_off, stiff_diag, stiff_off], [-1, 0, 1], shape=(n, n), format="csc")
    mass = diags(
        [np.full(n - 1, h / 6.0), np.full(n, 4.0 * h / 6.0), np.full(n - 1, h / 6.0)],
        [-1, 0, 1],
        shape=(n, n),
        format="csc",
    )
    return stiffness, mass


def _solve(profile: DiffusivityProfile, cells: int, count: int, sigma: float) -> Tuple[np.ndarray, np.ndarray]:
    stiffness, mass = assemble(profile, cells)
    v0 = np.ones(cells - 1)
    try:
        values, vectors = eigsh(stiffness, k=count, M=mass, sigma=sigma, which="LM", v0=v0)
    except (RuntimeError, ArpackError, ArpackNoConvergence) as e:
        raise SingularMatrix(f"FEM eigenproblem failed for cells={cells}: {e}") from e
    order = np.argsort(values)
    return values[order], vectors[:, order]


def fem_oracle(profile: DiffusivityProfile, cells: int, mode_count: int) -> FemSpectrum:
    """Smallest `mode_count` generalised eigenpairs of the stiffness/mass pencil."""
    if mode_count < 1:
        raise ValueError(f"mode_count must be >= 1, got {mode_count}")
    if cells < 10 * mode_count:
        raise SingularMatrix(f"cells={cells} too coarse for {mode_count} modes (need >= {10 * mode_count})")

    values, vectors = _solve(profile, cells, mode_count, sigma=0.0)
    nodal = np.zeros((mode_count, cells + 1))
    nodal[:, 1:-1] = vectors.T
    # Same branch as the semi-analytic modes: positive slope at x = 0.
    nodal *= np.where(nodal[:, 1:2] < 0.0, -1.0, 1.0)
    logger.info("FEM oracle: %d modes on %d cells", mode_count, cells)
    return FemSpectrum(
        eigenvalues=values,
        nodes=np.linspace(0.0, 1.0, cells + 1),
        vectors=nodal,
        profile=profile,
    )


def fem_eigenvalues_near(
    profile: DiffusivityProfile,
    cells: int,
    sigma: float,
    count: int = 4,
) -> np.ndarray:
    """The `count` FEM eigenvalues closest to `sigma`."""
    values, _ = _solve(profile, cells, count, sigma=sigma)
    return values
