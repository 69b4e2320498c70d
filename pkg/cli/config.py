"""Configuration layering for the command line: flag > config file > environment > default."""

import os
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


class ConfigFileError(ValueError):
    """The --config or --plan file is missing or not valid TOML."""


class CliConfig(BaseModel):
    """Options shared by every subcommand."""

    subcommand: str = Field(description="Selected subcommand")
    config_path: Optional[str] = Field(default=None, description="TOML file with subcommand defaults")
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64, description="Seed override, wins over the file seed")
    out_dir: str = Field(default="runs", description="Directory for result files")
    verbose: bool = Field(default=False, description="Debug logging")
    threads: int = Field(default=1, ge=1, description="Worker processes for replicated runs")


def load_config() -> Dict[str, Any]:
    """Load configuration from environment variables with defaults."""
    return {
        "threads": int(os.getenv("SPDECP_THREADS", str(os.cpu_count() or 1))),
        "out_dir": os.getenv("SPDECP_OUTPUT_DIR", "runs"),
        "verbose": os.getenv("SPDECP_VERBOSE", "false").lower() == "true",
        "database_url": os.getenv("SPDECP_DATABASE_URL", "sqlite:///runs/registry.db"),
        "enable_database_storage": os.getenv("SPDECP_ENABLE_DATABASE_STORAGE", "false").lower() == "true",
        "mode_factor": int(os.getenv("SPDECP_MODE_FACTOR", "20")),
        "time_factor": int(os.getenv("SPDECP_TIME_FACTOR", "4")),
    }


def read_toml(path: str) -> Dict[str, Any]:
    """Parse a TOML file, mapping I/O and syntax problems to ConfigFileError."""
    p = Path(path)
    if not p.is_file():
        raise ConfigFileError(f"config file not found: {path}")
    try:
        with open(p, "rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigFileError(f"{path}: {e}") from e


def file_section(data: Dict[str, Any], subcommand: str) -> Dict[str, Any]:
    """Top-level scalar keys overlaid with the table named after the subcommand.

    Keys use underscores; `theta-minus` and `theta_minus` are the same key.
    """
    values = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    table = data.get(subcommand) or data.get(subcommand.replace("-", "_")) or {}
    values.update({k.replace("-", "_"): v for k, v in table.items()})
    return values


def layered(
    flags: Dict[str, Any],
    file_values: Dict[str, Any],
    env: Dict[str, Any],
    defaults: Dict[str, Any],
) -> Dict[str, Any]:
    """Merge the four sources; a None flag means 'not given'."""
    merged = dict(defaults)
    merged.update({k: v for k, v in env.items() if k in defaults})
    merged.update({k: v for k, v in file_values.items() if k in defaults})
    merged.update({k: v for k, v in flags.items() if v is not None and k in defaults})
    return merged
