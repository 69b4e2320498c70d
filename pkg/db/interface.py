"""Run registry: storage and retrieval of Monte Carlo experiment runs."""

import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional

from sqlalchemy import create_engine, func
from sqlalchemy.engine import make_url
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker

from mc_harness.models import RateReport, ReplicateRecord

from .models import DatabaseExperimentRun, convert_run_to_db_models, row_to_replicate
from .schema import Base, ExperimentRunDB, ReplicateDB

logger = logging.getLogger(__name__)

DEFAULT_DATABASE_URL = "sqlite:///runs/registry.db"


class RunRegistry:
    """Interface for database operations on experiment runs."""

    def __init__(self, database_url: Optional[str] = None, echo: bool = False):
        """
        Initialize the registry.

        Args:
            database_url: SQLAlchemy URL (defaults to a SQLite file under runs/)
            echo: Log every SQL statement
        """
        if database_url is None:
            database_url = DEFAULT_DATABASE_URL

        self.database_url = database_url
        self._ensure_sqlite_directory(database_url)
        self.engine = create_engine(database_url, echo=echo)
        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)

        self.create_tables()

    @staticmethod
    def _ensure_sqlite_directory(database_url: str) -> None:
        url = make_url(database_url)
        if url.get_backend_name() == "sqlite" and url.database and url.database != ":memory:":
            Path(url.database).parent.mkdir(parents=True, exist_ok=True)

    def create_tables(self):
        """Create all database tables."""
        try:
            Base.metadata.create_all(bind=self.engine)
            logger.info("Registry tables ready at %s", self.database_url)
        except SQLAlchemyError as e:
            logger.error(f"Failed to create registry tables: {e}")
            raise

    def drop_tables(self):
        """Drop all database tables (use with caution)."""
        try:
            Base.metadata.drop_all(bind=self.engine)
            logger.info("Registry tables dropped")
        except SQLAlchemyError as e:
            logger.error(f"Failed to drop registry tables: {e}")
            raise

    @contextmanager
    def get_session(self):
        """Get database session with automatic cleanup."""
        session = self.SessionLocal()
        try:
            yield session
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def save_run(self, report: RateReport, records: List[ReplicateRecord], run_id: Optional[str] = None) -> str:
        """Store a report and its replicates; returns the run id."""
        run_row, replicate_rows = convert_run_to_db_models(report, records, run_id)
        try:
            with self.get_session() as session:
                session.add(run_row)
                session.add_all(replicate_rows)
                session.commit()
                logger.info("Saved run %s with %d replicates", run_row.id, len(replicate_rows))
                return run_row.id
        except SQLAlchemyError as e:
            logger.error(f"Failed to save run: {e}")
            raise

    def get_report(self, run_id: str) -> Optional[RateReport]:
        """Retrieve the RateReport of a run."""
        try:
            with self.get_session() as session:
                run = session.get(ExperimentRunDB, run_id)
                if run is None:
                    return None
                stored = DatabaseExperimentRun(
                    id=run.id,
                    timestamp=run.timestamp,
                    variant=run.variant,
                    master_seed=int(run.master_seed),
                    replicates_per_n=run.replicates_per_n,
                    n_values=run.n_values,
                    plan=run.plan,
                    report=run.report,
                )
                return stored.to_report()
        except SQLAlchemyError as e:
            logger.error(f"Failed to retrieve run: {e}")
            raise

    def get_replicates(self, run_id: str, n: Optional[int] = None) -> List[ReplicateRecord]:
        """Replicates of a run ordered by (n, rep), optionally for one resolution."""
        try:
            with self.get_session() as session:
                query = session.query(ReplicateDB).filter(ReplicateDB.experiment_run_id == run_id)
                if n is not None:
                    query = query.filter(ReplicateDB.n == n)
                rows = query.order_by(ReplicateDB.n, ReplicateDB.rep).all()
                return [row_to_replicate(row) for row in rows]
        except SQLAlchemyError as e:
            logger.error(f"Failed to retrieve replicates: {e}")
            raise

    def list_runs(self, limit: int = 100, variant: Optional[str] = None) -> List[Dict[str, Any]]:
        """List recent runs with basic info."""
        try:
            with self.get_session() as session:
                query = session.query(ExperimentRunDB)
                if variant is not None:
                    query = query.filter(ExperimentRunDB.variant == variant)
                runs = query.order_by(ExperimentRunDB.timestamp.desc()).limit(limit).all()
                return [
                    {
                        "id": run.id,
                        "timestamp": run.timestamp.isoformat(),
                        "variant": run.variant,
                        "master_seed": int(run.master_seed),
                        "n_values": run.n_values,
                        "replicates_per_n": run.replicates_per_n,
                        "slopes": {k: v["slope"] for k, v in run.report.get("slopes", {}).items()},
                    }
                    for run in runs
                ]
        except SQLAlchemyError as e:
            logger.error(f"Failed to list runs: {e}")
            raise

    def delete_run(self, run_id: str) -> bool:
        """Delete a run and its replicates."""
        try:
            with self.get_session() as session:
                run = session.get(ExperimentRunDB, run_id)
                if run is None:
                    logger.warning(f"Run not found: {run_id}")
                    return False
                session.delete(run)
                session.commit()
                logger.info(f"Deleted run: {run_id}")
                return True
        except SQLAlchemyError as e:
            logger.error(f"Failed to delete run: {e}")
            raise

    def get_database_stats(self) -> Dict[str, Any]:
        """Get basic statistics about the registry contents."""
        try:
            with self.get_session() as session:
                stats = {
                    "runs_count": session.query(ExperimentRunDB).count(),
                    "replicates_count": session.query(ReplicateDB).count(),
                    "failed_replicates_count": session.query(ReplicateDB).filter(ReplicateDB.error.isnot(None)).count(),
                }
                variants = (
                    session.query(ExperimentRunDB.variant, func.count(ExperimentRunDB.variant))
                    .group_by(ExperimentRunDB.variant)
                    .all()
                )
                stats["variants_distribution"] = {variant: count for variant, count in variants}
                return stats
        except SQLAlchemyError as e:
            logger.error(f"Failed to get registry stats: {e}")
            raise


def create_run_registry(database_url: Optional[str] = None, echo: bool = False) -> RunRegistry:
    """Factory function to create the run registry."""
    if database_url is None:
        database_url = os.getenv("SPDECP_DATABASE_URL", DEFAULT_DATABASE_URL)
    return RunRegistry(database_url, echo=echo)
