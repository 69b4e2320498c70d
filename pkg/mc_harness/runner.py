"""Replicated Monte Carlo runs over a sequence of resolutions."""

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from estimators import estimate_cusum_known_theta, estimate_simultaneous
from functionals import compute_functionals
from kernels import MeasurementGrid, SiteCoefficients, eigen_coefficients_all
from limit_law import ArgminLawConfig, ks_distance, ks_to_limit, normalize_change_point_errors, sample_argmin
from simulation import SimulationConfig, simulate
from simulation.io import CONFIG_PREFIX, format_float
from spectrum import DiffusivityProfile, SpectralDecomposition, decompose
from toy_model import ToyConfig, rescaled_errors, toy_estimate_known_theta, toy_simulate

from .models import (
    CSV_COLUMNS,
    EstimatorVariant,
    EtaScheduleKind,
    ExperimentPlan,
    NonPositiveError,
    RateReport,
    ReplicateFailureBudgetExceeded,
    ReplicateRecord,
    SizeSummary,
    SlopeFit,
)
from .seeds import replicate_seed
from .slopes import fit_loglog_slope, summarize_errors

logger = logging.getLogger(__name__)

REPLICATE_ERRORS = (ValueError, RuntimeError, ArithmeticError)

# Per-process context installed by the pool initializer.
_CONTEXT: Dict[str, object] = {}


@lru_cache(maxsize=8)
def prepare_size(profile: DiffusivityProfile, n: int, mode_count: int) -> Tuple[SpectralDecomposition, SiteCoefficients]:
    """Spectrum and kernel coefficients at one resolution; deterministic, hence cached."""
    decomp = decompose(profile, mode_count)
    coeffs = eigen_coefficients_all(decomp, MeasurementGrid(n=n))
    return decomp, coeffs


def _spde_replicate(plan: ExperimentPlan, profile: DiffusivityProfile, n: int, rep: int, seed: int,
                    decomp: SpectralDecomposition, coeffs: SiteCoefficients) -> ReplicateRecord:
    config = SimulationConfig(
        profile=profile,
        grid=coeffs.grid,
        horizon=plan.horizon,
        time_steps=plan.time_factor * n * n,
        mode_count=plan.mode_factor * n,
        seed=seed,
        scheme=plan.scheme,
        export_brownian=True,
    )
    funcs = compute_functionals(simulate(config, decomp, coeffs))
    tau = profile.tau
    if plan.variant is EstimatorVariant.CUSUM_KNOWN:
        result = estimate_cusum_known_theta(funcs, profile.theta_minus, profile.theta_plus)
        return ReplicateRecord(
            n=n, rep=rep, seed=seed,
            theta_minus_hat=profile.theta_minus,
            theta_plus_hat=profile.theta_plus,
            k_hat=result.k_hat,
            tau_hat=result.tau_hat,
            err_tm=0.0,
            err_tp=0.0,
            err_tau=abs(result.tau_hat - tau),
        )
    merge = plan.variant is EstimatorVariant.SIMULTANEOUS_NO_CIRC
    est = estimate_simultaneous(funcs, profile.band, merge_circ=merge)
    return ReplicateRecord(
        n=n, rep=rep, seed=seed,
        theta_minus_hat=est.theta_minus_hat,
        theta_plus_hat=est.theta_plus_hat,
        theta_circ_hat=est.theta_circ_hat,
        k_hat=est.k_hat,
        tau_hat=est.tau_hat,
        err_tm=abs(est.theta_minus_hat - profile.theta_minus),
        err_tp=abs(est.theta_plus_hat - profile.theta_plus),
        err_tau=abs(est.tau_hat - tau),
    )


def _toy_replicate(plan: ExperimentPlan, profile: DiffusivityProfile, n: int, rep: int, seed: int) -> ReplicateRecord:
    config = ToyConfig(
        theta_minus=profile.theta_minus,
        theta_plus=profile.theta_plus,
        tau=profile.tau,
        n=n,
        grid_points=plan.toy_grid_points,
        seed=seed,
    )
    tau_hat = toy_estimate_known_theta(toy_simulate(config), profile.theta_minus, profile.theta_plus)
    return ReplicateRecord(
        n=n, rep=rep, seed=seed,
        theta_minus_hat=profile.theta_minus,
        theta_plus_hat=profile.theta_plus,
        k_hat=max(1, int(math.ceil(round(tau_hat * n, 9)))),
        tau_hat=tau_hat,
        err_tm=0.0,
        err_tp=0.0,
        err_tau=abs(tau_hat - profile.tau),
    )


def run_replicate(n: int, rep: int) -> ReplicateRecord:
    """One replicate at resolution n using the per-process context."""
    plan: ExperimentPlan = _CONTEXT["plan"]
    profile: DiffusivityProfile = _CONTEXT["profile"]
    seed = replicate_seed(plan.seed, n, rep)
    try:
        if plan.variant is EstimatorVariant.TOY:
            return _toy_replicate(plan, profile, n, rep, seed)
        return _spde_replicate(plan, profile, n, rep, seed, _CONTEXT["decomp"], _CONTEXT["coeffs"])
    except REPLICATE_ERRORS as e:
        logger.warning("Replicate n=%d rep=%d failed: %s", n, rep, e)
        return ReplicateRecord(n=n, rep=rep, seed=seed, error=f"{type(e).__name__}: {e}")


def _install_context(plan, profile, decomp, coeffs) -> None:
    _CONTEXT.update(plan=plan, profile=profile, decomp=decomp, coeffs=coeffs)


def _run_replicate_pair(args: Tuple[int, int]) -> ReplicateRecord:
    return run_replicate(*args)


class ExperimentRunner:
    """
    Runs an ExperimentPlan and aggregates the errors into a RateReport.

    Resolutions are processed in order; replicates at one resolution share the
    cached spectrum and kernel coefficients and run in a process pool when
    more than one worker is requested.
    """

    def __init__(
        self,
        plan: ExperimentPlan,
        threads: int = 1,
        show_progress: bool = False,
        replicate_csv: Optional[Path] = None,
        registry=None,
    ):
        """
        Initialize the runner.

        Args:
            plan: Validated experiment plan
            threads: Worker processes for the replicates (1 runs inline)
            show_progress: Show a tqdm bar per resolution
            replicate_csv: Where to write the per-replicate CSV (optional)
            registry: RunRegistry used to persist the run (optional)
        """
        self.plan = plan
        self.threads = max(1, int(threads))
        self.show_progress = show_progress
        self.replicate_csv = Path(replicate_csv) if replicate_csv is not None else None
        self.registry = registry
        self.records: List[ReplicateRecord] = []
        self._oracle: Optional[np.ndarray] = None

    @property
    def oracle_samples(self) -> np.ndarray:
        """Monte Carlo argmin samples keyed by the master seed, drawn once per runner."""
        if self._oracle is None:
            config = ArgminLawConfig(replicates=self.plan.oracle_replicates, seed=self.plan.seed)
            self._oracle = sample_argmin(config)
        return self._oracle

    def profile_for(self, n: int) -> DiffusivityProfile:
        return self.plan.eta_schedule.profile_for(self.plan.profile, 1.0 / n)

    def _run_size(self, n: int) -> List[ReplicateRecord]:
        profile = self.profile_for(n)
        decomp = coeffs = None
        if self.plan.variant is not EstimatorVariant.TOY:
            decomp, coeffs = prepare_size(profile, n, self.plan.mode_factor * n)
        tasks = [(n, rep) for rep in range(self.plan.replicates)]
        desc = f"n={n}"

        if self.threads == 1:
            _install_context(self.plan, profile, decomp, coeffs)
            return [run_replicate(*t) for t in tqdm(tasks, desc=desc, disable=not self.show_progress)]

        with ProcessPoolExecutor(
            max_workers=self.threads,
            initializer=_install_context,
            initargs=(self.plan, profile, decomp, coeffs),
        ) as pool:
            chunksize = max(1, len(tasks) // (4 * self.threads))
            results = pool.map(_run_replicate_pair, tasks, chunksize=chunksize)
            return list(tqdm(results, total=len(tasks), desc=desc, disable=not self.show_progress))

    def _summarize(self, n: int, records: List[ReplicateRecord]) -> SizeSummary:
        ok = [r for r in records if not r.failed]
        profile = self.profile_for(n)
        metrics = ["err_tau"] if self._tau_only else ["err_tm", "err_tp", "err_tau"]
        errors = {m: summarize_errors([getattr(r, m) for r in ok]) for m in metrics} if ok else {}
        ks = ks_oracle = None
        if ok and self.plan.eta_schedule.kind is EtaScheduleKind.POWER and self._tau_only:
            rescaled = self._rescaled(n, profile, ok)
            ks = ks_to_limit(rescaled)
            ks_oracle = ks_distance(rescaled, self.oracle_samples)
        return SizeSummary(
            n=n,
            delta=1.0 / n,
            eta=profile.eta,
            replicates=len(ok),
            failures=len(records) - len(ok),
            errors=errors,
            ks_to_limit=ks,
            ks_to_oracle=ks_oracle,
        )

    @property
    def _tau_only(self) -> bool:
        return self.plan.variant in (EstimatorVariant.CUSUM_KNOWN, EstimatorVariant.TOY)

    def _rescaled(self, n: int, profile: DiffusivityProfile, records: List[ReplicateRecord]) -> np.ndarray:
        tau_hats = [r.tau_hat for r in records]
        if self.plan.variant is EstimatorVariant.TOY:
            return rescaled_errors(tau_hats, profile.tau, profile.eta, n**-1.5)
        return normalize_change_point_errors(
            tau_hats, profile.tau, profile, MeasurementGrid(n=n).kernel, self.plan.horizon, profile.eta, 1.0 / n
        )

    def _fit_slopes(self, sizes: List[SizeSummary]) -> Dict[str, SlopeFit]:
        slopes: Dict[str, SlopeFit] = {}
        if len(sizes) < 3 or not sizes[0].errors:
            return slopes
        for metric in sizes[0].errors:
            medians = [(s.delta, s.errors[metric].median) for s in sizes]
            try:
                slopes[metric] = fit_loglog_slope(medians, statistic="median")
            except NonPositiveError:
                # hitting the block exactly leaves a zero median
                means = [(s.delta, s.errors[metric].mean) for s in sizes]
                logger.warning("Median of %s is zero at some n; fitting the mean instead", metric)
                slopes[metric] = fit_loglog_slope(means, statistic="mean")
        return slopes

    def write_replicate_csv(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(CONFIG_PREFIX + self.plan.model_dump_json() + "\n")
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in self.records:
                row = []
                for col in CSV_COLUMNS:
                    value = getattr(r, col)
                    row.append(format_float(value) if isinstance(value, float) else value)
                writer.writerow(row)
        return path

    def run(self) -> RateReport:
        """Run every resolution of the plan and fit the rate slopes."""
        sizes: List[SizeSummary] = []
        self.records = []
        total_failures = 0
        for n in self.plan.n_values:
            records = self._run_size(n)
            self.records.extend(records)
            summary = self._summarize(n, records)
            total_failures += summary.failures
            sizes.append(summary)
            logger.info("n=%d: %d replicates, %d failures", n, summary.replicates, summary.failures)

        total = len(self.plan.n_values) * self.plan.replicates
        if total_failures > self.plan.failure_budget * total:
            raise ReplicateFailureBudgetExceeded(
                f"{total_failures} of {total} replicates failed (budget {self.plan.failure_budget:.0%})"
            )

        csv_ref = None
        if self.replicate_csv is not None:
            csv_ref = str(self.write_replicate_csv(self.replicate_csv))
        report = RateReport(plan=self.plan, sizes=sizes, slopes=self._fit_slopes(sizes), replicate_csv=csv_ref)

        if self.registry is not None:
            self.registry.save_run(report, self.records)
        return report


def run_plan(
    plan: ExperimentPlan,
    threads: int = 1,
    show_progress: bool = False,
    replicate_csv: Optional[Path] = None,
    registry=None,
) -> RateReport:
    """Run `plan` and return its RateReport."""
    runner = ExperimentRunner(
        plan,
        threads=threads,
        show_progress=show_progress,
        replicate_csv=replicate_csv,
        registry=registry,
    )
    return runner.run()
