"""Pydantic models for experiment plans, per-replicate records and rate reports."""

import math
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from simulation.models import SimulationScheme
from spectrum.models import DiffusivityProfile


class NonPositiveError(ValueError):
    """A log-log fit was asked to take the logarithm of a non-positive summary."""


class ReplicateFailureBudgetExceeded(RuntimeError):
    """More than the allowed share of replicates raised an error."""


class EstimatorVariant(str, Enum):
    """Estimation pipeline run on each replicate."""
    SIMULTANEOUS = "simultaneous"
    SIMULTANEOUS_NO_CIRC = "simultaneous-no-circ"
    CUSUM_KNOWN = "cusum-known"
    TOY = "toy"


class EtaScheduleKind(str, Enum):
    FIXED = "fixed"
    POWER = "power"


class EtaSchedule(BaseModel):
    """Jump height as a function of delta: fixed, or |eta| = delta^beta."""

    model_config = ConfigDict(frozen=True)

    kind: EtaScheduleKind = Field(default=EtaScheduleKind.FIXED, description="fixed or power")
    beta: float = Field(default=1.25, gt=0.0, description="Exponent of the power schedule")

    def profile_for(self, base: DiffusivityProfile, delta: float) -> DiffusivityProfile:
        """Profile used at resolution delta; theta_plus moves, band and tau stay."""
        if self.kind is EtaScheduleKind.FIXED:
            return base
        sign = -1.0 if base.eta < 0.0 else 1.0
        return DiffusivityProfile(
            theta_minus=base.theta_minus,
            theta_plus=base.theta_minus + sign * delta**self.beta,
            tau=base.tau,
            theta_lo=base.theta_lo,
            theta_hi=base.theta_hi,
        )


class ExperimentPlan(BaseModel):
    """Replicated experiment over a sequence of resolutions n."""

    model_config = ConfigDict(frozen=True)

    n_values: List[int] = Field(description="Resolutions n, strictly increasing")
    profile: DiffusivityProfile = Field(description="True diffusivity profile (theta_plus may follow the schedule)")
    horizon: float = Field(default=1.0, gt=0.0, description="Observation horizon T")
    replicates: int = Field(default=200, ge=50, description="Replicates per n")
    variant: EstimatorVariant = Field(default=EstimatorVariant.SIMULTANEOUS, description="Estimation pipeline")
    eta_schedule: EtaSchedule = Field(default_factory=EtaSchedule, description="Jump height schedule")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Master seed")
    output: Optional[str] = Field(default=None, description="Report path")
    mode_factor: int = Field(default=20, ge=10, description="M = mode_factor * n")
    time_factor: int = Field(default=4, ge=4, description="N_t = time_factor * n^2")
    scheme: SimulationScheme = Field(default=SimulationScheme.EXACT, description="OU time stepping")
    toy_grid_points: int = Field(default=100_000, ge=2, description="n_x of the toy variant")
    oracle_replicates: int = Field(default=2000, ge=100, description="Argmin samples drawn for the two-sample KS check")
    failure_budget: float = Field(default=0.01, ge=0.0, lt=1.0, description="Allowed share of failed replicates")

    @field_validator("n_values")
    @classmethod
    def _increasing(cls, values: List[int]) -> List[int]:
        if not values:
            raise ValueError("n_values must not be empty")
        if any(n < 3 for n in values):
            raise ValueError("every n must be at least 3")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"n_values must be strictly increasing, got {values}")
        return values


class ReplicateRecord(BaseModel):
    """One row of the per-replicate CSV."""

    n: int
    rep: int
    seed: int
    theta_minus_hat: float = math.nan
    theta_plus_hat: float = math.nan
    theta_circ_hat: float = math.nan
    k_hat: int = 0
    tau_hat: float = math.nan
    err_tm: float = math.nan
    err_tp: float = math.nan
    err_tau: float = math.nan
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


CSV_COLUMNS = [
    "n", "rep", "seed", "theta_minus_hat", "theta_plus_hat", "theta_circ_hat",
    "k_hat", "tau_hat", "err_tm", "err_tp", "err_tau",
]


class ErrorSummary(BaseModel):
    median: float = Field(description="Median absolute error")
    iqr: float = Field(description="Interquartile range")
    mean: float = Field(description="Mean absolute error")


class SizeSummary(BaseModel):
    """Aggregated errors at one resolution."""

    n: int = Field(description="Resolution")
    delta: float = Field(description="1 / n")
    eta: float = Field(description="Jump height used at this resolution")
    replicates: int = Field(description="Replicates that finished")
    failures: int = Field(description="Replicates that raised")
    errors: Dict[str, ErrorSummary] = Field(description="Summaries keyed by err_tm / err_tp / err_tau")
    ks_to_limit: Optional[float] = Field(default=None, description="KS distance of rescaled errors to the closed-form argmin law")
    ks_to_oracle: Optional[float] = Field(
        default=None, description="Two-sample KS distance of rescaled errors to Monte Carlo argmin samples"
    )


class SlopeFit(BaseModel):
    """Least squares fit of log(summary) against log(delta)."""

    slope: float = Field(description="Fitted exponent")
    stderr: float = Field(description="Standard error of the slope")
    points: int = Field(description="Number of resolutions used")
    statistic: str = Field(default="median", description="Summary that was fitted")


class RateReport(BaseModel):
    """Deterministic output of a plan run."""

    plan: ExperimentPlan = Field(description="Echo of the plan that produced the report")
    sizes: List[SizeSummary] = Field(description="Per-resolution summaries")
    slopes: Dict[str, SlopeFit] = Field(default_factory=dict, description="Log-log slopes per error metric")
    replicate_csv: Optional[str] = Field(default=None, description="Path of the per-replicate CSV")
