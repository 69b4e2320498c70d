"""Configuration of the signal-plus-white-noise change point model."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ToyConfig(BaseModel):
    """dY(x) = theta(x) dx + sigma dB(x) on a grid of `grid_points` cells."""

    model_config = ConfigDict(frozen=True)

    theta_minus: float = Field(description="Drift left of the change point")
    theta_plus: float = Field(description="Drift right of the change point")
    tau: float = Field(gt=0.0, lt=1.0, description="Change point location")
    n: int = Field(ge=2, description="Resolution n; the noise level is n^{-3/2}")
    grid_points: int = Field(default=100_000, ge=2, description="Number of x-cells n_x")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Master seed")
    sigma: Optional[float] = Field(default=None, gt=0.0, description="Override of the noise level")

    @model_validator(mode="after")
    def _check_grid(self) -> "ToyConfig":
        if self.grid_points < self.n:
            raise ValueError(f"grid_points={self.grid_points} must be at least n={self.n}")
        return self

    @property
    def noise_level(self) -> float:
        """sigma = delta n^{-1/2} = n^{-3/2} unless overridden."""
        return self.sigma if self.sigma is not None else self.n**-1.5

    @property
    def eta(self) -> float:
        return self.theta_plus - self.theta_minus

    @property
    def dx(self) -> float:
        return 1.0 / self.grid_points
