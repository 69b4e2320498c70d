"""Database package for Monte Carlo run storage."""

from .interface import DEFAULT_DATABASE_URL, RunRegistry, create_run_registry
from .models import (
    DatabaseExperimentRun,
    convert_run_to_db_models,
    replicate_to_row,
    row_to_replicate,
)
from .schema import Base, ExperimentRunDB, ReplicateDB

__all__ = [
    'DEFAULT_DATABASE_URL',
    'RunRegistry',
    'create_run_registry',
    'Base',
    'ExperimentRunDB',
    'ReplicateDB',
    'DatabaseExperimentRun',
    'convert_run_to_db_models',
    'replicate_to_row',
    'row_to_replicate',
]
