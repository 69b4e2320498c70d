"""Subcommand implementations. Each returns an exit code and raises on failure."""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from estimators import estimate_cusum_known_theta, estimate_simultaneous
from functionals import Quadrature, compute_functionals, export_functionals_csv
from kernels import KernelFamily, MeasurementGrid, MeasurementKernel, eigen_coefficients_all
from limit_law import (
    ArgminLawConfig,
    argmin_cdf,
    ks_distance,
    ks_to_limit,
    sample_argmin,
    summarize_argmin,
)
from mc_harness import ExperimentPlan, ExperimentRunner
from simulation import SimulationConfig, dump_observations, format_float, load_observations, simulate
from simulation.io import CONFIG_PREFIX
from spectrum import DiffusivityProfile, comparison_bounds, decompose
from toy_model import (
    ToyConfig,
    rescaled_errors,
    run_toy_replicates,
    toy_estimate_unknown_theta,
    toy_simulate,
)

from .config import CliConfig, read_toml

logger = logging.getLogger(__name__)


class UsageError(ValueError):
    """A required option was supplied neither as a flag nor in the config file."""


def _require(settings: Dict[str, Any], *keys: str) -> None:
    missing = [k for k in keys if settings.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"missing required option(s): {flags}")


def _profile(settings: Dict[str, Any]) -> DiffusivityProfile:
    _require(settings, "theta_minus", "theta_plus", "tau")
    return DiffusivityProfile(
        theta_minus=settings["theta_minus"],
        theta_plus=settings["theta_plus"],
        tau=settings["tau"],
        theta_lo=settings.get("theta_lo"),
        theta_hi=settings.get("theta_hi"),
    )


def _kernel(settings: Dict[str, Any]) -> MeasurementKernel:
    return MeasurementKernel(family=KernelFamily(settings["kernel"]), degree=settings["kernel_degree"])


def _output_path(cli: CliConfig, explicit, default_name: str) -> Path:
    path = Path(explicit) if explicit else Path(cli.out_dir) / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    """JSON with repr-exact floats and a trailing newline; key order is insertion order."""
    with open(path, "w") as fh:
        fh.write(json.dumps(payload, indent=2))
        fh.write("\n")
    return path


def _write_column_csv(path: Path, header: List[str], columns: List[np.ndarray], config_json: str) -> Path:
    with open(path, "w", newline="") as fh:
        fh.write(CONFIG_PREFIX + config_json + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([format_float(v) for v in row])
    return path


# --------------------------------------------------------------------------- spectrum

SPECTRUM_DEFAULTS = dict(theta_minus=None, theta_plus=None, tau=None, theta_lo=None, theta_hi=None, modes=10, out=None)


def run_spectrum(settings: Dict[str, Any], cli: CliConfig) -> int:
    profile = _profile(settings)
    modes = int(settings["modes"])
    decomp = decompose(profile, modes)
    eigenvalues = [float(v) for v in decomp.eigenvalues[:modes]]

    print(f"📊 First {modes} eigenvalues of -Δθ (θ₋={profile.theta_minus}, θ₊={profile.theta_plus}, τ={profile.tau})")
    for k, lam in enumerate(eigenvalues, start=1):
        print(f"  {k:4d}  {format_float(lam)}")

    path = _output_path(cli, settings.get("out"), "spectrum.json")
    write_json(path, {
        "config": {"profile": profile.model_dump(mode="json"), "modes": modes},
        "eigenvalues": eigenvalues,
        "comparison_bounds": [list(comparison_bounds(profile, k)) for k in range(1, modes + 1)],
    })
    print(f"✓ Wrote {path}")
    return 0


# --------------------------------------------------------------------------- simulate

SIMULATE_DEFAULTS = dict(
    theta_minus=None, theta_plus=None, tau=None, theta_lo=None, theta_hi=None,
    n=None, horizon=1.0, modes=None, time_steps=None, mode_factor=20, time_factor=4,
    scheme="exact", kernel="polynomial", kernel_degree=3, seed=0, stream=0,
    brownian=True, format="csv", out=None, functionals=None,
)


def run_simulate(settings: Dict[str, Any], cli: CliConfig) -> int:
    profile = _profile(settings)
    _require(settings, "n")
    n = int(settings["n"])
    config = SimulationConfig(
        profile=profile,
        grid=MeasurementGrid(n=n, kernel=_kernel(settings)),
        horizon=settings["horizon"],
        time_steps=settings["time_steps"] or settings["time_factor"] * n * n,
        mode_count=settings["modes"] or settings["mode_factor"] * n,
        seed=settings["seed"],
        stream=settings["stream"],
        scheme=settings["scheme"],
        export_brownian=bool(settings["brownian"]),
    )

    print(f"🔍 Decomposing -Δθ with M={config.mode_count} modes")
    decomp = decompose(profile, config.mode_count)
    coeffs = eigen_coefficients_all(decomp, config.grid)
    print(f"🔍 Simulating n={n} sites over N_t={config.time_steps} steps ({config.scheme.value})")
    obs = simulate(config, decomp, coeffs)

    suffix = ".npz" if settings["format"] == "npz" else ".csv"
    path = dump_observations(obs, _output_path(cli, settings.get("out"), "observations" + suffix))
    print(f"✓ Wrote observations to {path}")

    if settings.get("functionals"):
        funcs = compute_functionals(obs)
        fpath = export_functionals_csv(funcs, _output_path(cli, settings["functionals"], ""), config.model_dump_json())
        print(f"✓ Wrote per-site functionals to {fpath}")
    return 0


# --------------------------------------------------------------------------- estimate

ESTIMATE_DEFAULTS = dict(
    input=None, method="simultaneous", no_circ=False, quadrature="trapezoid",
    theta_lo=None, theta_hi=None, out=None,
)


def run_estimate(settings: Dict[str, Any], cli: CliConfig) -> int:
    _require(settings, "input")
    obs = load_observations(settings["input"])
    profile = obs.config.profile
    funcs = compute_functionals(obs)
    quadrature = Quadrature(settings["quadrature"])
    lo = settings["theta_lo"] if settings["theta_lo"] is not None else profile.theta_lo
    hi = settings["theta_hi"] if settings["theta_hi"] is not None else profile.theta_hi
    if not 0.0 < lo <= hi:
        raise UsageError(f"invalid diffusivity band [{lo}, {hi}]")

    if settings["method"] == "cusum":
        result = estimate_cusum_known_theta(funcs, profile.theta_minus, profile.theta_plus, quadrature)
        print(f"✓ CUSUM (known θ±): k̂={result.k_hat}, τ̂={format_float(result.tau_hat)}")
    else:
        result = estimate_simultaneous(funcs, (lo, hi), merge_circ=bool(settings["no_circ"]), quadrature=quadrature)
        print(f"✓ θ̂₋={format_float(result.theta_minus_hat)}  θ̂₊={format_float(result.theta_plus_hat)}  "
              f"θ̂∘={format_float(result.theta_circ_hat)}")
        print(f"✓ k̂={result.k_hat}, τ̂={format_float(result.tau_hat)}")

    path = _output_path(cli, settings.get("out"), "estimate.json")
    write_json(path, {
        "config": {
            "input": str(settings["input"]),
            "method": settings["method"],
            "no_circ": bool(settings["no_circ"]),
            "quadrature": quadrature.value,
            "band": [lo, hi],
            "simulation": obs.config.model_dump(mode="json"),
        },
        **result.model_dump(mode="json"),
    })
    print(f"✓ Wrote {path}")
    return 0


# --------------------------------------------------------------------------- toy

TOY_DEFAULTS = dict(
    theta_minus=None, theta_plus=None, tau=None, n=20, grid_points=100_000,
    replicates=2000, sigma=None, seed=0, unknown_theta=False, oracle_replicates=2000, out=None,
)


def run_toy(settings: Dict[str, Any], cli: CliConfig) -> int:
    _require(settings, "theta_minus", "theta_plus", "tau")
    config = ToyConfig(
        theta_minus=settings["theta_minus"],
        theta_plus=settings["theta_plus"],
        tau=settings["tau"],
        n=settings["n"],
        grid_points=settings["grid_points"],
        seed=settings["seed"],
        sigma=settings["sigma"],
    )
    replicates = int(settings["replicates"])
    print(f"🔍 Toy model: η={config.eta}, σ={format_float(config.noise_level)}, n_x={config.grid_points}, R={replicates}")

    if settings["unknown_theta"]:
        tau_hats = np.array([toy_estimate_unknown_theta(toy_simulate(config, replicate=r))[2] for r in range(replicates)])
    else:
        tau_hats = run_toy_replicates(config, replicates, show_progress=cli.verbose)
    errors = rescaled_errors(tau_hats, config.tau, config.eta, config.noise_level)
    ks = ks_to_limit(errors)
    oracle = sample_argmin(ArgminLawConfig(replicates=int(settings["oracle_replicates"]), seed=config.seed))
    ks_oracle = ks_distance(errors, oracle)

    config_json = json.dumps({"toy": config.model_dump(mode="json"), "replicates": replicates,
                              "unknown_theta": bool(settings["unknown_theta"])})
    path = _output_path(cli, settings.get("out"), "toy_errors.csv")
    _write_column_csv(path, ["rep", "tau_hat", "rescaled_error"],
                      [np.arange(replicates), tau_hats, errors], config_json)
    summary_path = path.with_suffix(".json")
    write_json(summary_path, {
        "config": json.loads(config_json),
        "summary": summarize_argmin(errors).model_dump(mode="json"),
        "ks_to_limit": ks,
        "ks_to_oracle": ks_oracle,
    })
    print(f"✓ KS distance to the argmin law: {ks:.4f} (closed form), {ks_oracle:.4f} (Monte Carlo, R={oracle.shape[0]})")
    print(f"✓ Wrote {path} and {summary_path}")
    return 0


# --------------------------------------------------------------------------- limit-law

LIMIT_LAW_DEFAULTS = dict(replicates=10_000, half_width=20.0, step=0.01, seed=0, out=None)


def run_limit_law(settings: Dict[str, Any], cli: CliConfig) -> int:
    config = ArgminLawConfig(
        half_width=settings["half_width"],
        step=settings["step"],
        replicates=settings["replicates"],
        seed=settings["seed"],
    )
    print(f"🔍 Sampling argmin of B(h) + |h|/2 on [-{config.half_width}, {config.half_width}], step {config.step}")
    samples = sample_argmin(config)
    summary = summarize_argmin(samples)

    path = _output_path(cli, settings.get("out"), "argmin_samples.csv")
    _write_column_csv(path, ["rep", "argmin", "closed_form_cdf"],
                      [np.arange(samples.shape[0]), samples, argmin_cdf(samples)], config.model_dump_json())
    summary_path = path.with_suffix(".json")
    write_json(summary_path, {"config": config.model_dump(mode="json"), **summary.model_dump(mode="json")})
    print(f"✓ mean={summary.mean:.4f} ± {summary.standard_error:.4f}, median|x|={summary.median_abs:.4f}")
    print(f"✓ KS distance to the closed-form CDF: {summary.ks_to_closed_form:.4f}")
    print(f"✓ Wrote {path} and {summary_path}")
    return 0


# --------------------------------------------------------------------------- mc-rates

MC_RATES_DEFAULTS = dict(
    plan=None, out=None, replicate_csv=None, seed=None,
    store=False, database_url=None, mode_factor=None, time_factor=None,
)


def load_plan(settings: Dict[str, Any]) -> ExperimentPlan:
    """Plan from the TOML file with --seed and env factor overrides applied."""
    _require(settings, "plan")
    data = read_toml(settings["plan"])
    if settings.get("seed") is not None:
        data["seed"] = settings["seed"]
    for key in ("mode_factor", "time_factor"):
        if settings.get(key) is not None and key not in data:
            data[key] = settings[key]
    return ExperimentPlan.model_validate(data)


def run_mc_rates(settings: Dict[str, Any], cli: CliConfig) -> int:
    plan = load_plan(settings)
    report_path = _output_path(cli, settings.get("out") or plan.output, "report.json")
    csv_path = Path(settings["replicate_csv"]) if settings.get("replicate_csv") else report_path.with_suffix(".csv")

    registry = None
    if settings.get("store"):
        from db import create_run_registry

        registry = create_run_registry(settings.get("database_url"))

    print(f"🔍 Running {plan.variant.value} over n={plan.n_values}, {plan.replicates} replicates each")
    runner = ExperimentRunner(plan, threads=cli.threads, show_progress=cli.verbose,
                              replicate_csv=csv_path, registry=registry)
    report = runner.run()

    with open(report_path, "w") as fh:
        fh.write(report.model_dump_json(indent=2))
        fh.write("\n")

    print("📊 Rate slopes (log error vs log δ):")
    for metric, fit in report.slopes.items():
        print(f"  {metric}: {fit.slope:.3f} ± {fit.stderr:.3f} ({fit.statistic})")
    for size in report.sizes:
        if size.ks_to_limit is not None and not math.isnan(size.ks_to_limit):
            print(f"  n={size.n}: KS to limit law {size.ks_to_limit:.4f} (closed form), {size.ks_to_oracle:.4f} (Monte Carlo)")
    print(f"✓ Wrote {report_path} and {csv_path}")
    return 0


COMMANDS = {
    "spectrum": (run_spectrum, SPECTRUM_DEFAULTS),
    "simulate": (run_simulate, SIMULATE_DEFAULTS),
    "estimate": (run_estimate, ESTIMATE_DEFAULTS),
    "toy": (run_toy, TOY_DEFAULTS),
    "limit-law": (run_limit_law, LIMIT_LAW_DEFAULTS),
    "mc-rates": (run_mc_rates, MC_RATES_DEFAULTS),
}
