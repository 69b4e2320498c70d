"""Pydantic configuration and observation records for the spectral simulator."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from kernels.models import MeasurementGrid
from spectrum.models import DiffusivityProfile


class SimulationError(ValueError):
    """Inputs to the simulator are mutually inconsistent."""


class SimulationScheme(str, Enum):
    """Time stepping of the eigen coordinates."""
    EXACT = "exact"
    EULER = "euler"


class SimulationConfig(BaseModel):
    """Everything needed to reproduce one simulated path bit for bit."""

    model_config = ConfigDict(frozen=True)

    profile: DiffusivityProfile = Field(description="Diffusivity with its change point")
    grid: MeasurementGrid = Field(description="Measurement sites and kernel")
    horizon: float = Field(default=1.0, gt=0.0, description="Observation horizon T")
    time_steps: int = Field(gt=0, description="Number of time steps N_t on [0, T]")
    mode_count: int = Field(gt=0, description="Number of eigenmodes M kept in the expansion")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Key of the counter-based noise stream")
    stream: int = Field(default=0, ge=0, lt=2**64, description="Second key word, e.g. a replicate tag")
    scheme: SimulationScheme = Field(default=SimulationScheme.EXACT, description="Exact OU or Euler transitions")
    chunk_steps: int = Field(default=1024, gt=0, description="Time steps generated per chunk")
    export_brownian: bool = Field(default=True, description="Keep the increments of B_{delta,i}")

    @model_validator(mode="after")
    def _check_resolution(self) -> "SimulationConfig":
        n = self.grid.n
        if self.time_steps < 4 * n * n:
            raise ValueError(f"time_steps={self.time_steps} below 4 n^2 = {4 * n * n}")
        if self.mode_count < 10 * n:
            raise ValueError(f"mode_count={self.mode_count} below 10 n = {10 * n}")
        return self

    @classmethod
    def default_for(
        cls,
        profile: DiffusivityProfile,
        n: int,
        horizon: float = 1.0,
        seed: int = 0,
        mode_factor: int = 20,
        time_factor: int = 4,
        **overrides,
    ) -> "SimulationConfig":
        """Config with M = mode_factor n and N_t = time_factor n^2."""
        params = dict(
            profile=profile,
            grid=MeasurementGrid(n=n),
            horizon=horizon,
            time_steps=time_factor * n * n,
            mode_count=mode_factor * n,
            seed=seed,
        )
        params.update(overrides)
        return cls(**params)

    @property
    def time_step(self) -> float:
        return self.horizon / self.time_steps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.time_steps + 1) * self.time_step


@dataclass(frozen=True, eq=False)
class ObservationSet:
    """Sampled local measurements X_{delta,i}(t_j) and X^Delta_{delta,i}(t_j).

    Rows are sites 1..n, columns are times t_0 = 0, ..., t_{N_t} = T. When the
    driving noise is exported, `brownian` holds the increments of B_{delta,i}
    over each step as an (n, N_t) array. `drift_values` holds D_{delta,i}(t_j),
    the drift of X_{delta,i}; files without it load with `None`.
    """

    times: np.ndarray
    values: np.ndarray
    laplacian_values: np.ndarray
    config: SimulationConfig
    brownian: Optional[np.ndarray] = None
    drift_values: Optional[np.ndarray] = None

    def __post_init__(self):
        for arr in (self.times, self.values, self.laplacian_values, self.brownian, self.drift_values):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def site_count(self) -> int:
        return int(self.values.shape[0])

    @property
    def time_steps(self) -> int:
        return int(self.times.shape[0] - 1)

    @property
    def time_step(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def has_brownian(self) -> bool:
        return self.brownian is not None

    @property
    def has_drift(self) -> bool:
        return self.drift_values is not None

    def subsample(self, factor: int) -> "ObservationSet":
        """Every `factor`-th time point of the same path; Brownian increments are summed."""
        if factor < 1 or self.time_steps % factor:
            raise SimulationError(f"factor {factor} does not divide time_steps={self.time_steps}")
        coarse = self.config.model_dump()
        coarse["time_steps"] = self.time_steps // factor
        brownian = None
        if self.brownian is not None:
            brownian = self.brownian.reshape(self.site_count, -1, factor).sum(axis=2)
        return ObservationSet(
            times=self.times[::factor].copy(),
            values=self.values[:, ::factor].copy(),
            laplacian_values=self.laplacian_values[:, ::factor].copy(),
            config=SimulationConfig.model_validate(coarse),
            brownian=brownian,
            drift_values=None if self.drift_values is None else self.drift_values[:, ::factor].copy(),
        )
