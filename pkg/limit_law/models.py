"""Configuration and summary records of the argmin limit law."""

from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ArgminLawConfig(BaseModel):
    """Discretisation of argmin_h {B(h) + |h|/2} over a two-sided Brownian motion."""

    model_config = ConfigDict(frozen=True)

    half_width: float = Field(default=20.0, ge=20.0, description="Truncation H of the real line")
    step: float = Field(default=0.01, gt=0.0, description="Grid step of h")
    replicates: int = Field(default=10_000, ge=1, description="Number of samples R")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Key of the noise stream")
    chunk_size: int = Field(default=1000, ge=1, description="Replicates simulated per counter block")

    @model_validator(mode="after")
    def _check_step(self) -> "ArgminLawConfig":
        if self.step > 1e-3 * self.half_width:
            raise ValueError(f"step={self.step} exceeds 1e-3 * half_width = {1e-3 * self.half_width}")
        return self

    @property
    def points_per_side(self) -> int:
        return int(round(self.half_width / self.step))


class ArgminSummary(BaseModel):
    """Quantiles and moments of a sample of argmin locations."""

    replicates: int = Field(description="Sample size")
    mean: float = Field(description="Sample mean")
    standard_error: float = Field(description="Standard error of the mean")
    median_abs: float = Field(description="Median of |argmin|")
    quantiles: Dict[str, float] = Field(description="Empirical quantiles keyed by probability")
    ks_to_closed_form: float = Field(description="One-sample KS distance to the closed-form CDF")
