#!/usr/bin/env python3
"""
Tests for the signal-plus-white-noise change point model.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

sys.path.insert(0, str(Path(__file__).parent))

from limit_law import ks_to_limit
from toy_model import (
    ToyConfig,
    cell_points,
    noise_profile,
    rescaled_errors,
    run_toy_replicates,
    toy_estimate_known_theta,
    toy_estimate_unknown_theta,
    toy_simulate,
)


def make_config(**overrides) -> ToyConfig:
    params = dict(theta_minus=1.0, theta_plus=1.5, tau=0.35, n=20, grid_points=20_000, seed=7)
    params.update(overrides)
    return ToyConfig(**params)


def test_config_properties():
    config = make_config()
    assert config.noise_level == pytest.approx(20**-1.5)
    assert config.eta == pytest.approx(0.5)
    assert config.dx == pytest.approx(5e-5)
    assert make_config(sigma=0.1).noise_level == 0.1
    with pytest.raises(ValidationError):
        make_config(grid_points=10)
    with pytest.raises(ValidationError):
        make_config(tau=1.0)


def test_simulation_is_reproducible():
    config = make_config()
    first = toy_simulate(config, replicate=3)
    assert first.shape == (20_000,)
    assert np.array_equal(first, toy_simulate(config, replicate=3))
    assert not np.allclose(first, toy_simulate(config, replicate=4))
    assert cell_points(config)[1] == pytest.approx(config.dx)


def test_noise_profile():
    config = make_config(grid_points=100)
    assert np.all(noise_profile(config) == config.noise_level)
    custom = noise_profile(config, lambda x: 0.1 + x)
    assert custom[0] == pytest.approx(0.1)
    with pytest.raises(ValueError):
        noise_profile(config, lambda x: x - 0.5)


def test_estimators_on_nearly_noiseless_data():
    print("🔍 Testing toy estimators with negligible noise")
    config = make_config(grid_points=1000, sigma=1e-12)
    dy = toy_simulate(config)
    assert toy_estimate_known_theta(dy, 1.0, 1.5) == pytest.approx(0.35)

    theta_minus, theta_plus, tau = toy_estimate_unknown_theta(dy)
    assert theta_minus == pytest.approx(1.0, rel=1e-6)
    assert theta_plus == pytest.approx(1.5, rel=1e-6)
    assert tau == pytest.approx(0.35)

    # weights only rescale a homoskedastic objective
    weighted = toy_estimate_known_theta(dy, 1.0, 1.5, weights=np.full(dy.shape, 4.0))
    assert weighted == pytest.approx(0.35)
    with pytest.raises(ValueError):
        toy_estimate_known_theta(dy, 1.0, 1.0)
    print("✓ Change point and drifts recovered")


def test_rescaled_errors_scale():
    errors = rescaled_errors([0.36, 0.34], 0.35, 0.5, 20**-1.5)
    # eta^2 n^3 (tau_hat - tau)
    assert np.allclose(errors, [0.25 * 8000 * 0.01, -0.25 * 8000 * 0.01])


def test_rescaled_errors_follow_the_argmin_law():
    print("🔍 Testing the toy limit law at n=20, eta=0.5")
    config = make_config()
    tau_hats = run_toy_replicates(config, 400)
    assert np.array_equal(tau_hats, run_toy_replicates(config, 400))
    errors = rescaled_errors(tau_hats, config.tau, config.eta, config.noise_level)
    ks = ks_to_limit(errors)
    print(f"📊 KS distance to the closed-form law: {ks:.4f}")
    assert ks < 0.12


if __name__ == "__main__":
    print("Toy Model - Component Testing")
    print("=" * 50)
    test_config_properties()
    test_simulation_is_reproducible()
    test_noise_profile()
    test_estimators_on_nearly_noiseless_data()
    test_rescaled_errors_scale()
    test_rescaled_errors_follow_the_argmin_law()
    print("\n🎉 All toy model tests passed!")
