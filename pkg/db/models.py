"""Database models that map between Monte Carlo results and the database schema."""

import math
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from mc_harness.models import RateReport, ReplicateRecord

from .schema import ExperimentRunDB, ReplicateDB

FLOAT_COLUMNS = (
    "theta_minus_hat", "theta_plus_hat", "theta_circ_hat",
    "tau_hat", "err_tm", "err_tp", "err_tau",
)


def _to_column(value: float) -> Optional[float]:
    # SQLite has no NaN
    return None if value is None or math.isnan(value) else float(value)


def _from_column(value: Optional[float]) -> float:
    return math.nan if value is None else float(value)


class DatabaseExperimentRun(BaseModel):
    """Pydantic model for a stored experiment run."""
    id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    variant: str
    master_seed: int
    replicates_per_n: int
    n_values: List[int]
    plan: Dict[str, Any] = Field(default_factory=dict)
    report: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_report(cls, report: RateReport, run_id: Optional[str] = None) -> "DatabaseExperimentRun":
        fields = dict(
            variant=report.plan.variant.value,
            master_seed=report.plan.seed,
            replicates_per_n=report.plan.replicates,
            n_values=list(report.plan.n_values),
            plan=report.plan.model_dump(mode="json"),
            report=report.model_dump(mode="json"),
        )
        if run_id is not None:
            fields["id"] = run_id
        return cls(**fields)

    def to_report(self) -> RateReport:
        return RateReport.model_validate(self.report)


def replicate_to_row(record: ReplicateRecord, run_id: str) -> ReplicateDB:
    """Convert a ReplicateRecord into an ORM row."""
    values = {name: _to_column(getattr(record, name)) for name in FLOAT_COLUMNS}
    return ReplicateDB(
        experiment_run_id=run_id,
        n=record.n,
        rep=record.rep,
        seed=str(record.seed),
        k_hat=record.k_hat,
        error=record.error,
        **values,
    )


def row_to_replicate(row: ReplicateDB) -> ReplicateRecord:
    """Convert an ORM row back into a ReplicateRecord."""
    values = {name: _from_column(getattr(row, name)) for name in FLOAT_COLUMNS}
    return ReplicateRecord(
        n=row.n,
        rep=row.rep,
        seed=int(row.seed),
        k_hat=row.k_hat or 0,
        error=row.error,
        **values,
    )


def convert_run_to_db_models(
    report: RateReport,
    records: List[ReplicateRecord],
    run_id: Optional[str] = None,
) -> Tuple[ExperimentRunDB, List[ReplicateDB]]:
    """Build the ORM rows for one run."""
    run = DatabaseExperimentRun.from_report(report, run_id)
    run_row = ExperimentRunDB(
        id=run.id,
        timestamp=run.timestamp,
        variant=run.variant,
        master_seed=str(run.master_seed),
        replicates_per_n=run.replicates_per_n,
        n_values=run.n_values,
        plan=run.plan,
        report=run.report,
    )
    return run_row, [replicate_to_row(r, run.id) for r in records]
