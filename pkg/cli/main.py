#!/usr/bin/env python3
"""
Command line entry point.

Subcommands:
    spectrum   eigenvalues of -Δθ for a two-level profile
    simulate   simulate local measurements and dump them to CSV/NPZ
    estimate   estimate (θ₋, θ₊, τ) from an observation dump
    toy        replicated change point errors in the signal-plus-noise model
    limit-law  Monte Carlo samples of the argmin limit law
    mc-rates   replicated convergence-rate experiment from a TOML plan

Exit codes: 0 success, 1 usage error, 2 runtime error.

Usage:
    uv run python -m cli <subcommand> [options]
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError
from sqlalchemy.exc import SQLAlchemyError

from .commands import COMMANDS, UsageError
from .config import CliConfig, ConfigFileError, file_section, layered, load_config, read_toml

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", dest="config_path", help="TOML file with defaults for the subcommand")
    parser.add_argument("--seed", type=int, help="Seed override (wins over any file seed)")
    parser.add_argument("--out-dir", help="Directory for result files")
    parser.add_argument("--verbose", action="store_true", default=None, help="Debug logging and progress bars")
    parser.add_argument("--threads", type=int, help="Worker processes (default: available parallelism)")


def _add_profile_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta-minus", type=float, help="Diffusivity left of the change point")
    parser.add_argument("--theta-plus", type=float, help="Diffusivity right of the change point")
    parser.add_argument("--tau", type=float, help="Change point in (0, 1)")
    parser.add_argument("--theta-lo", type=float, help="Lower end of the admissible band")
    parser.add_argument("--theta-hi", type=float, help="Upper end of the admissible band")


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="spdecp",
        description="Change point estimation for the stochastic heat equation",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=CliArgumentParser)

    p = subparsers.add_parser("spectrum", help="Eigenvalues of -Δθ")
    _add_global_flags(p)
    _add_profile_flags(p)
    p.add_argument("--modes", type=int, help="Number of eigenvalues (default 10)")
    p.add_argument("--out", help="Output JSON path")

    p = subparsers.add_parser("simulate", help="Simulate local measurements")
    _add_global_flags(p)
    _add_profile_flags(p)
    p.add_argument("--n", type=int, help="Number of measurement sites")
    p.add_argument("--horizon", type=float, help="Observation horizon T (default 1)")
    p.add_argument("--modes", type=int, help="Eigenmodes M (default mode_factor * n)")
    p.add_argument("--time-steps", type=int, help="Time steps N_t (default time_factor * n^2)")
    p.add_argument("--mode-factor", type=int, help="M = mode_factor * n")
    p.add_argument("--time-factor", type=int, help="N_t = time_factor * n^2")
    p.add_argument("--scheme", choices=["exact", "euler"], help="OU time stepping")
    p.add_argument("--kernel", choices=["polynomial", "bump"], help="Kernel family")
    p.add_argument("--kernel-degree", type=int, help="Exponent of the polynomial kernel (>= 3)")
    p.add_argument("--stream", type=int, help="Second key of the noise stream")
    p.add_argument("--no-brownian", dest="brownian", action="store_false", default=None,
                   help="Drop the Brownian increments from the dump (estimates then use the biased increment sum)")
    p.add_argument("--format", choices=["csv", "npz"], help="Dump format (default csv)")
    p.add_argument("--out", help="Output path of the dump")
    p.add_argument("--functionals", help="Also write per-site functionals CSV to this path")

    p = subparsers.add_parser("estimate", help="Estimate the change point from a dump")
    _add_global_flags(p)
    p.add_argument("--input", help="Observation dump written by `simulate`")
    p.add_argument("--method", choices=["simultaneous", "cusum"], help="Estimator (default simultaneous)")
    p.add_argument("--no-circ", action="store_true", default=None, help="Merge the change point block into the + side")
    p.add_argument("--quadrature", choices=["trapezoid", "left"], help="Quadrature of the quadratic variation")
    p.add_argument("--theta-lo", type=float, help="Lower end of the admissible band")
    p.add_argument("--theta-hi", type=float, help="Upper end of the admissible band")
    p.add_argument("--out", help="Output JSON path")

    p = subparsers.add_parser("toy", help="Signal-plus-white-noise change point model")
    _add_global_flags(p)
    p.add_argument("--theta-minus", type=float, help="Drift left of the change point")
    p.add_argument("--theta-plus", type=float, help="Drift right of the change point")
    p.add_argument("--tau", type=float, help="Change point in (0, 1)")
    p.add_argument("--n", type=int, help="Resolution n (noise level n^{-3/2})")
    p.add_argument("--grid-points", type=int, help="Number of x-cells n_x")
    p.add_argument("--replicates", type=int, help="Number of replicates")
    p.add_argument("--sigma", type=float, help="Override of the noise level")
    p.add_argument("--unknown-theta", action="store_true", default=None, help="Estimate the drifts as well")
    p.add_argument("--oracle-replicates", type=int, help="Monte Carlo argmin samples for the two-sample KS check")
    p.add_argument("--out", help="Output CSV path of the rescaled errors")

    p = subparsers.add_parser("limit-law", help="Samples of argmin{B(h) + |h|/2}")
    _add_global_flags(p)
    p.add_argument("--replicates", type=int, help="Number of samples")
    p.add_argument("--half-width", type=float, help="Truncation H (>= 20)")
    p.add_argument("--step", type=float, help="Grid step (<= 1e-3 H)")
    p.add_argument("--out", help="Output CSV path of the samples")

    p = subparsers.add_parser("mc-rates", help="Convergence-rate experiment")
    _add_global_flags(p)
    p.add_argument("--plan", help="TOML plan (keys mirror ExperimentPlan)")
    p.add_argument("--out", help="Report JSON path (default: plan output or <out-dir>/report.json)")
    p.add_argument("--replicate-csv", help="Per-replicate CSV path (default: next to the report)")
    p.add_argument("--store", action="store_true", default=None, help="Save the run in the registry")
    p.add_argument("--database-url", help="Registry URL")

    return parser


def resolve(args: argparse.Namespace):
    """CliConfig and the merged subcommand settings for parsed `args`."""
    env = load_config()
    env["store"] = env.pop("enable_database_storage")
    flags = {k: v for k, v in vars(args).items() if k not in ("subcommand", "config_path")}
    file_values = file_section(read_toml(args.config_path), args.subcommand) if args.config_path else {}

    _, defaults = COMMANDS[args.subcommand]
    settings = layered(flags, file_values, env, defaults)

    global_defaults = dict(seed=None, out_dir="runs", verbose=False, threads=1)
    shared = layered(flags, file_values, env, global_defaults)
    cli = CliConfig(subcommand=args.subcommand, config_path=args.config_path, **shared)
    return cli, settings


def main(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run the subcommand and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        cli, settings = resolve(args)
    except (ConfigFileError, ValidationError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if cli.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    run, _ = COMMANDS[cli.subcommand]

    try:
        return run(settings, cli)
    except (UsageError, ConfigFileError, ValidationError) as e:
        parser.print_usage(sys.stderr)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError, ArithmeticError, IndexError, OSError, SQLAlchemyError) as e:
        logger.debug("Subcommand failed", exc_info=True)
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
