"""
Command line interface for the change point toolkit.

Main components:
- main: argument parsing, config layering and exit code mapping
- load_config: environment defaults (SPDECP_*) read through python-dotenv
- COMMANDS: subcommand implementations with their built-in defaults
"""

from .commands import COMMANDS, UsageError, load_plan, write_json
from .config import CliConfig, ConfigFileError, file_section, layered, load_config, read_toml
from .main import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, build_parser, main

__all__ = [
    "COMMANDS",
    "UsageError",
    "load_plan",
    "write_json",
    "CliConfig",
    "ConfigFileError",
    "file_section",
    "layered",
    "load_config",
    "read_toml",
    "EXIT_OK",
    "EXIT_RUNTIME",
    "EXIT_USAGE",
    "build_parser",
    "main",
]
