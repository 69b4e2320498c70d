"""Pydantic result records of the change point estimators."""

from typing import List, Optional

from pydantic import BaseModel, Field


class DegenerateBlock(ValueError):
    """A quadratic variation needed by the estimator is not positive."""


class EstimateResult(BaseModel):
    """Joint estimate of (theta_-, theta_+, theta_circ, k) and the profile over k."""

    theta_minus_hat: float = Field(description="Diffusivity left of the estimated change point")
    theta_plus_hat: float = Field(description="Diffusivity right of the estimated change point")
    theta_circ_hat: float = Field(description="Nuisance diffusivity of the estimated change point block")
    k_hat: int = Field(ge=1, description="Estimated change point block (smallest on ties)")
    tau_hat: float = Field(description="k_hat * delta")
    profile: List[float] = Field(description="Profile log-likelihood L(k), k = 1..n")
    merged_circ: bool = Field(default=False, description="Whether block k was merged into the + side")


class CusumResult(BaseModel):
    """Known-diffusivity CUSUM estimate with its objective trace."""

    k_hat: int = Field(ge=1, description="Maximiser of the CUSUM objective (smallest on ties)")
    tau_hat: float = Field(description="k_hat * delta")
    objective: List[float] = Field(description="Objective O(k), k = 1..n")
    centered: Optional[List[float]] = Field(
        default=None, description="O(k) - O(k_bullet) when the true block is known"
    )
