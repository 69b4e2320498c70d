"""Database schema definitions for Monte Carlo run storage."""

from datetime import datetime, timezone

from sqlalchemy import JSON, Column, DateTime, Float, ForeignKey, Index, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class ExperimentRunDB(Base):
    """One call of run_plan: the plan echo and the full report."""
    __tablename__ = "experiment_runs"

    id = Column(String, primary_key=True)
    timestamp = Column(DateTime, default=lambda: datetime.now(timezone.utc), nullable=False)
    variant = Column(String, nullable=False)
    master_seed = Column(String, nullable=False)  # uint64 does not fit a signed SQLite integer
    replicates_per_n = Column(Integer, nullable=False)
    n_values = Column(JSON, nullable=False)
    plan = Column(JSON, nullable=False)
    report = Column(JSON, nullable=False)

    replicates = relationship("ReplicateDB", back_populates="experiment_run", cascade="all, delete-orphan")

    __table_args__ = (
        Index("idx_experiment_runs_timestamp", "timestamp"),
        Index("idx_experiment_runs_variant", "variant"),
    )


class ReplicateDB(Base):
    """One replicate of a run: estimates, errors and the failure message if any."""
    __tablename__ = "replicates"

    id = Column(Integer, primary_key=True, autoincrement=True)
    experiment_run_id = Column(String, ForeignKey("experiment_runs.id"), nullable=False)
    n = Column(Integer, nullable=False)
    rep = Column(Integer, nullable=False)
    seed = Column(String, nullable=False)
    theta_minus_hat = Column(Float)
    theta_plus_hat = Column(Float)
    theta_circ_hat = Column(Float)
    k_hat = Column(Integer)
    tau_hat = Column(Float)
    err_tm = Column(Float)
    err_tp = Column(Float)
    err_tau = Column(Float)
    error = Column(Text)

    experiment_run = relationship("ExperimentRunDB", back_populates="replicates")

    __table_args__ = (
        Index("idx_replicates_run", "experiment_run_id"),
        Index("idx_replicates_run_n", "experiment_run_id", "n"),
    )
