"""
Monte Carlo harness for convergence rates and the change point limit law.

Main components:
- ExperimentPlan / RateReport: plan file schema and deterministic report
- ExperimentRunner / run_plan: replicated runs with per-replicate seeds and cached spectra
- fit_loglog_slope: least squares rate exponent with standard error
- replicate_seed: seed of replicate r at resolution n derived from the master seed
"""

from .models import (
    CSV_COLUMNS,
    ErrorSummary,
    EstimatorVariant,
    EtaSchedule,
    EtaScheduleKind,
    ExperimentPlan,
    NonPositiveError,
    RateReport,
    ReplicateFailureBudgetExceeded,
    ReplicateRecord,
    SizeSummary,
    SlopeFit,
)
from .runner import ExperimentRunner, prepare_size, run_plan, run_replicate
from .seeds import replicate_seed
from .slopes import fit_loglog_slope, summarize_errors

__all__ = [
    "CSV_COLUMNS",
    "ErrorSummary",
    "EstimatorVariant",
    "EtaSchedule",
    "EtaScheduleKind",
    "ExperimentPlan",
    "NonPositiveError",
    "RateReport",
    "ReplicateFailureBudgetExceeded",
    "ReplicateRecord",
    "SizeSummary",
    "SlopeFit",
    "ExperimentRunner",
    "prepare_size",
    "run_plan",
    "run_replicate",
    "replicate_seed",
    "fit_loglog_slope",
    "summarize_errors",
]
