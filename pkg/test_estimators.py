#!/usr/bin/env python3
"""
Tests for the simultaneous and CUSUM change point estimators.
"""

import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from estimators import (
    DegenerateBlock,
    centered_trace,
    clip_to_band,
    cusum_objective,
    estimate_cusum_known_theta,
    estimate_simultaneous,
    group_maximum,
    profile_objective,
)
from functionals import BlockFunctionals, compute_functionals
from kernels import MeasurementGrid, eigen_coefficients_all
from simulation import SimulationConfig, SimulationScheme, simulate
from spectrum import DiffusivityProfile, decompose


def noiseless(theta, quadratic=None, k_bullet=None, martingale=None):
    """Functionals with A_i = θ_i I_i (+ M_i)."""
    theta = np.asarray(theta, dtype=float)
    b = np.ones_like(theta) if quadratic is None else np.asarray(quadratic, dtype=float)
    a = theta * b
    if martingale is not None:
        a = a + martingale
    return BlockFunctionals.from_arrays(a, b, m=martingale, k_bullet=k_bullet)


def test_group_maximum_and_clipping():
    theta, value = group_maximum([3.0, 10.0, 0.0], [2.0, 2.0, 0.0], (1.0, 2.0))
    assert theta[0] == pytest.approx(1.5)
    assert theta[1] == 2.0
    assert theta[2] == 1.5  # empty group takes the midpoint
    assert value[0] == pytest.approx(1.5 * 3.0 - 0.5 * 1.5**2 * 2.0)
    assert value[2] == 0.0
    assert np.array_equal(clip_to_band(np.array([0.5, 1.2, 9.0]), (1.0, 2.0)), [1.0, 1.2, 2.0])


def test_simultaneous_recovers_noiseless_parameters():
    print("🔍 Testing the simultaneous estimator on noiseless functionals")
    theta = [1.0, 1.0, 1.0, 1.4, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0]
    funcs = noiseless(theta, quadratic=np.linspace(1.0, 3.0, 10))
    result = estimate_simultaneous(funcs, (1.0, 2.0))
    assert result.k_hat == 4
    assert result.tau_hat == pytest.approx(0.4)
    assert result.theta_minus_hat == pytest.approx(1.0)
    assert result.theta_plus_hat == pytest.approx(2.0)
    assert result.theta_circ_hat == pytest.approx(1.4)
    assert len(result.profile) == 10
    assert not result.merged_circ
    print(f"✓ k̂={result.k_hat}, θ̂₋={result.theta_minus_hat}, θ̂₊={result.theta_plus_hat}")


def test_profile_is_the_maximum_over_a_parameter_grid():
    """Brute-force separability: no grid point beats the closed-form profile at its k."""
    rng = np.random.default_rng(3)
    b = rng.uniform(1.0, 2.0, 6)
    a = rng.uniform(1.0, 2.0, 6) * b
    funcs = BlockFunctionals.from_arrays(a, b)
    band = (1.0, 2.0)
    result = estimate_simultaneous(funcs, band)
    grid = np.linspace(*band, 21)
    for k in range(1, 7):
        best = max(profile_objective(funcs, tm, tp, tc, k) for tm, tp, tc in itertools.product(grid, grid, grid))
        assert best <= result.profile[k - 1] + 1e-12
    at_hat = profile_objective(
        funcs, result.theta_minus_hat, result.theta_plus_hat, result.theta_circ_hat, result.k_hat
    )
    assert at_hat == pytest.approx(max(result.profile))


def test_ties_go_to_the_smallest_block():
    funcs = BlockFunctionals.from_arrays(np.full(6, 2.0), np.ones(6))
    assert estimate_simultaneous(funcs, (1.0, 3.0)).k_hat == 1
    assert estimate_cusum_known_theta(funcs, 2.0, 2.0).k_hat == 1


def test_merged_nuisance_variant():
    theta = [1.0, 1.0, 1.0, 1.4, 2.0, 2.0, 2.0, 2.0]
    result = estimate_simultaneous(noiseless(theta), (1.0, 2.0), merge_circ=True)
    assert result.merged_circ
    assert result.theta_circ_hat == result.theta_plus_hat
    assert result.k_hat in (4, 5)


def test_degenerate_and_small_inputs():
    funcs = BlockFunctionals.from_arrays([1.0, 1.0, 1.0], [1.0, 0.0, 1.0])
    with pytest.raises(DegenerateBlock):
        estimate_simultaneous(funcs, (1.0, 2.0))
    with pytest.raises(ValueError):
        estimate_simultaneous(BlockFunctionals.from_arrays([1.0, 1.0], [1.0, 1.0]), (1.0, 2.0))
    with pytest.raises(ValueError):
        profile_objective(BlockFunctionals.from_arrays([1.0] * 3, [1.0] * 3), 1.0, 1.0, 1.0, 4)


def test_cusum_known_theta():
    theta = [1.0, 1.0, 1.0, 1.4, 2.0, 2.0, 2.0]
    funcs = noiseless(theta, k_bullet=4)
    result = estimate_cusum_known_theta(funcs, 1.0, 2.0)
    assert result.k_hat == 4
    assert result.centered[3] == 0.0
    assert max(result.centered) == 0.0
    assert np.allclose(result.objective, cusum_objective(funcs, 1.0, 2.0))


def test_centered_trace_equals_direct_objective():
    rng = np.random.default_rng(11)
    theta = np.array([1.0, 1.0, 1.0, 1.0, 1.3, 2.0, 2.0, 2.0, 2.0])
    b = rng.uniform(5.0, 10.0, 9)
    m = rng.normal(0.0, 1.0, 9)
    funcs = noiseless(theta, quadratic=b, k_bullet=5, martingale=m)
    z = centered_trace(funcs, 1.0, 2.0)
    direct = estimate_cusum_known_theta(funcs, 1.0, 2.0)
    assert np.allclose(z, direct.centered, atol=1e-12)
    assert int(np.argmax(z)) + 1 == direct.k_hat

    with pytest.raises(ValueError):
        centered_trace(noiseless(theta, quadratic=b, martingale=m), 1.0, 2.0)


def test_centered_trace_on_simulated_paths():
    print("🔍 Testing the centred trace against CUSUM on simulated paths")
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    grid = MeasurementGrid(n=5)
    decomp = decompose(profile, 50)
    coeffs = eigen_coefficients_all(decomp, grid)
    for r in range(100):
        config = SimulationConfig(
            profile=profile, grid=grid, horizon=0.1, time_steps=4000, mode_count=50,
            seed=17, stream=r, scheme=SimulationScheme.EULER,
        )
        funcs = compute_functionals(simulate(config, decomp, coeffs))
        z = centered_trace(funcs, 1.0, 2.0)
        direct = estimate_cusum_known_theta(funcs, 1.0, 2.0, quadrature="left")
        scale = np.max(np.abs(direct.objective))
        assert np.allclose(z, direct.centered, atol=1e-7 * scale)
        assert int(np.argmax(z)) + 1 == direct.k_hat
    print("✓ Argmax agrees on every replicate")


def test_simultaneous_on_a_simulated_path():
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    grid = MeasurementGrid(n=10)
    decomp = decompose(profile, 200)
    coeffs = eigen_coefficients_all(decomp, grid)
    config = SimulationConfig(profile=profile, grid=grid, time_steps=400, mode_count=200, seed=2024)
    funcs = compute_functionals(simulate(config, decomp, coeffs))
    result = estimate_simultaneous(funcs, (0.1, 10.0))
    assert abs(result.k_hat - grid.k_bullet(profile)) <= 1
    assert abs(result.theta_minus_hat - 1.0) < 0.5
    assert abs(result.theta_plus_hat - 2.0) < 0.5



def test_simultaneous_is_unbiased_with_a_wide_band():
    """Mean θ̂± over replicates stays near the truth when the band does not clip."""
    print("🔍 Testing E[θ̂±] on exact OU paths with band (0.1, 10)")
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    grid = MeasurementGrid(n=10)
    decomp = decompose(profile, 200)
    coeffs = eigen_coefficients_all(decomp, grid)
    estimates = np.empty((20, 2))
    for r in range(estimates.shape[0]):
        config = SimulationConfig.default_for(profile, 10, seed=77, stream=r)
        result = estimate_simultaneous(compute_functionals(simulate(config, decomp, coeffs)), (0.1, 10.0))
        estimates[r] = result.theta_minus_hat, result.theta_plus_hat
    mean_minus, mean_plus = estimates.mean(axis=0)
    print(f"📊 mean θ̂₋={mean_minus:.4f}, θ̂₊={mean_plus:.4f}")
    assert abs(mean_minus - 1.0) < 0.1
    assert abs(mean_plus - 2.0) < 0.1
    print("✓ Both means within 0.1 of the truth")


def test_reversing_the_sites_swaps_the_sides():
    rng = np.random.default_rng(29)
    b = rng.uniform(1.0, 3.0, 9)
    a = rng.uniform(0.5, 2.5, 9) * b
    m = rng.normal(0.0, 0.3, 9)
    band = (0.1, 10.0)
    forward = estimate_simultaneous(BlockFunctionals.from_arrays(a, b, m=m, k_bullet=4), band)
    backward = estimate_simultaneous(
        BlockFunctionals.from_arrays(a[::-1], b[::-1], m=m[::-1], k_bullet=9 + 1 - 4), band
    )
    assert backward.k_hat == 9 + 1 - forward.k_hat
    assert backward.theta_minus_hat == pytest.approx(forward.theta_plus_hat, rel=1e-12)
    assert backward.theta_plus_hat == pytest.approx(forward.theta_minus_hat, rel=1e-12)
    assert backward.theta_circ_hat == pytest.approx(forward.theta_circ_hat, rel=1e-12)
    assert np.allclose(backward.profile, forward.profile[::-1], rtol=1e-12)


if __name__ == "__main__":
    print("Estimators - Component Testing")
    print("=" * 50)
    test_group_maximum_and_clipping()
    test_simultaneous_recovers_noiseless_parameters()
    test_profile_is_the_maximum_over_a_parameter_grid()
    test_ties_go_to_the_smallest_block()
    test_merged_nuisance_variant()
    test_degenerate_and_small_inputs()
    test_cusum_known_theta()
    test_centered_trace_equals_direct_objective()
    test_centered_trace_on_simulated_paths()
    test_simultaneous_on_a_simulated_path()
    test_simultaneous_is_unbiased_with_a_wide_band()
    test_reversing_the_sites_swaps_the_sides()
    print("\n🎉 All estimator tests passed!")
