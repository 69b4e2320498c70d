"""Per-site sufficient statistics and diagnostic records."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field


class MissingBrownianPath(RuntimeError):
    """A diagnostic needs M_{delta,i} but the Brownian increments were not exported."""


class Quadrature(str, Enum):
    """Time quadrature used for I_{delta,i}."""
    TRAPEZOID = "trapezoid"
    LEFT = "left"


@dataclass(frozen=True, eq=False)
class BlockFunctionals:
    """A_i = int X^Delta dX, I_{delta,i} = int (X^Delta)^2 dt and, optionally, M_i = int X^Delta dB.

    `quadratic_variation` is the trapezoid sum and `quadratic_variation_left` the
    left-point sum on the same grid. Arrays are indexed by site i - 1.
    """

    drift_integral: np.ndarray
    quadratic_variation: np.ndarray
    quadratic_variation_left: np.ndarray
    martingale: Optional[np.ndarray] = None
    delta: Optional[float] = None
    k_bullet: Optional[int] = None

    @classmethod
    def from_arrays(cls, a, b, m=None, k_bullet: Optional[int] = None) -> "BlockFunctionals":
        """Functionals built from given A and B arrays (both quadratures set to B)."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return cls(
            drift_integral=a,
            quadratic_variation=b,
            quadratic_variation_left=b,
            martingale=None if m is None else np.asarray(m, dtype=float),
            delta=1.0 / a.shape[0],
            k_bullet=k_bullet,
        )

    @property
    def site_count(self) -> int:
        return int(self.drift_integral.shape[0])

    @property
    def has_martingale(self) -> bool:
        return self.martingale is not None

    def quadratic(self, quadrature: Quadrature = Quadrature.TRAPEZOID) -> np.ndarray:
        if Quadrature(quadrature) is Quadrature.LEFT:
            return self.quadratic_variation_left
        return self.quadratic_variation

    def require_martingale(self) -> np.ndarray:
        if self.martingale is None:
            raise MissingBrownianPath("Brownian increments were not exported with the observations")
        return self.martingale


class QvBands(BaseModel):
    """Mean bands of I_{delta,i} off and at the change point block."""

    off_block_minus: Tuple[float, float] = Field(description="Band of E[I_i] for sites left of k_bullet")
    off_block_plus: Tuple[float, float] = Field(description="Band of E[I_i] for sites right of k_bullet")
    change_block: Tuple[float, float] = Field(description="Leading band of E[I_k_bullet], up to O(1/delta)")
    change_block_exact: Tuple[float, float] = Field(description="Non-asymptotic band using lambda_lower")


class TailDiagnostic(BaseModel):
    """Empirical tail probability of a weighted sum of quadratic variations."""

    z: float = Field(description="Deviation threshold")
    empirical: float = Field(ge=0.0, le=1.0, description="Fraction of replicates with |centred sum| >= z")
    standard_error: float = Field(ge=0.0, description="Binomial standard error of `empirical`")
    bound: float = Field(ge=0.0, le=1.0, description="Bernstein bound, clipped at 1")
    replicates: int = Field(description="Number of replicates used")

    @property
    def respected(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.standard_error
