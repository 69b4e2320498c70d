#!/usr/bin/env python3
"""
Tests for the spectral simulation, its noise streams and the observation dumps.
"""

import sys
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

sys.path.insert(0, str(Path(__file__).parent))

from kernels import MeasurementGrid, eigen_coefficients_all
from simulation import (
    SimulationConfig,
    SimulationError,
    SimulationScheme,
    block_normals,
    brownian_increments_for_site,
    dump_observations,
    expected_second_moment,
    joint_increments,
    load_observations,
    mode_normals,
    simulate,
    transition_covariance,
    transition_moments,
)
from spectrum import DiffusivityProfile, decompose

PROFILE = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)


@lru_cache(maxsize=4)
def setup(n: int = 5, modes: int = 50):
    decomp = decompose(PROFILE, modes)
    coeffs = eigen_coefficients_all(decomp, MeasurementGrid(n=n))
    return decomp, coeffs


def make_config(**overrides) -> SimulationConfig:
    params = dict(
        profile=PROFILE,
        grid=MeasurementGrid(n=5),
        horizon=1.0,
        time_steps=400,
        mode_count=50,
        seed=42,
    )
    params.update(overrides)
    return SimulationConfig(**params)


def test_config_validation():
    with pytest.raises(ValidationError):
        make_config(time_steps=99)
    with pytest.raises(ValidationError):
        make_config(mode_count=49)
    config = SimulationConfig.default_for(PROFILE, n=5, seed=3)
    assert config.time_steps == 100 and config.mode_count == 100
    assert config.time_step == pytest.approx(0.01)
    assert config.times[-1] == pytest.approx(1.0)


def test_transition_law():
    lam = np.array([1.0, 50.0, 2000.0])
    decay, v, c = transition_moments(lam, 0.01)
    assert np.allclose(decay, np.exp(-lam * 0.01))
    cov = transition_covariance(50.0, 0.01)
    assert np.all(np.linalg.eigvalsh(cov) >= 0.0)

    z1, z2 = block_normals(7, 0, 0, 200_000, 3)
    dw, xi = joint_increments(z1, z2, v, c, 0.01)
    assert np.allclose(np.var(xi, axis=0), v, rtol=0.02)
    assert np.allclose(np.mean(xi * dw, axis=0), c, rtol=0.05)


def test_noise_is_keyed_by_mode_and_step():
    z1, z2 = block_normals(1, 0, 3, 16, 4)
    again, _ = block_normals(1, 0, 3, 16, 4)
    assert np.array_equal(z1, again)
    assert not np.allclose(z1, z2)

    # steps are addressed directly, independent of where a chunk starts
    later, _ = block_normals(1, 0, 8, 11, 4)
    assert np.array_equal(z1[5:], later)
    # a larger mode count leaves the first modes untouched
    wider, wider2 = block_normals(1, 0, 3, 16, 9)
    assert np.array_equal(wider[:, :4], z1)
    assert np.array_equal(wider2[:, :4], z2)
    pair = mode_normals(1, 0, 2, 3, 16)
    assert np.array_equal(pair[:, 0], z1[:, 2]) and np.array_equal(pair[:, 1], z2[:, 2])

    other_stream, _ = block_normals(1, 1, 3, 16, 4)
    other_seed, _ = block_normals(2, 0, 3, 16, 4)
    assert not np.allclose(z1, other_stream)
    assert not np.allclose(z1, other_seed)
    assert not np.allclose(z1[:, 0], z1[:, 1])


def test_simulation_is_deterministic():
    print("🔍 Testing bit-identical simulation")
    decomp, coeffs = setup()
    config = make_config(chunk_steps=64)
    first = simulate(config, decomp, coeffs)
    second = simulate(config, decomp, coeffs)
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.laplacian_values, second.laplacian_values)
    assert np.all(first.values[:, 0] == 0.0)

    other = simulate(make_config(chunk_steps=64, stream=1), decomp, coeffs)
    assert not np.allclose(first.values, other.values)
    print("✓ Same config gives identical paths")


def test_chunking_and_truncation_share_the_noise():
    decomp, coeffs = setup(modes=100)
    base = simulate(make_config(chunk_steps=400), decomp, coeffs)
    chunked = simulate(make_config(chunk_steps=7), decomp, coeffs)
    scale = np.max(np.abs(base.values))
    assert np.allclose(chunked.values, base.values, rtol=1e-12, atol=1e-14 * scale)
    assert np.allclose(chunked.brownian, base.brownian, rtol=1e-12, atol=1e-14)

    # doubling M only adds the tail modes on top of the same realisation
    wider = simulate(make_config(mode_count=100), decomp, coeffs)
    assert np.max(np.abs(wider.values - base.values)) < 0.05 * scale


def test_brownian_export_matches_regeneration():
    decomp, coeffs = setup()
    config = make_config(chunk_steps=100)
    obs = simulate(config, decomp, coeffs)
    assert obs.has_brownian
    for i in (1, 4):
        assert np.allclose(brownian_increments_for_site(config, coeffs, i), obs.brownian[i - 1], rtol=1e-13, atol=1e-15)


def test_euler_scheme_stability_check():
    decomp, coeffs = setup()
    with pytest.raises(SimulationError):
        simulate(make_config(scheme=SimulationScheme.EULER), decomp, coeffs)


def test_subsample_keeps_the_path():
    decomp, coeffs = setup()
    obs = simulate(make_config(), decomp, coeffs)
    coarse = obs.subsample(2)
    assert coarse.time_steps == 200
    assert np.array_equal(coarse.values, obs.values[:, ::2])
    assert np.allclose(coarse.brownian, obs.brownian[:, 0::2] + obs.brownian[:, 1::2])
    with pytest.raises(SimulationError):
        obs.subsample(3)
    with pytest.raises(ValidationError):
        obs.subsample(8)  # 50 steps < 4 n^2


def test_exact_scheme_is_a_semimartingale_under_refinement():
    """X_i(t_j) - θ_i Σ_{l<j} XD_i(t_l) Δt - B_i(t_j) shrinks as Δt halves on one noise path."""
    print("🔍 Testing semimartingale consistency under Δt halving")
    decomp, coeffs = setup()
    grid = MeasurementGrid(n=5)
    sites = [i for i in range(1, 6) if grid.block_diffusivity(i, PROFILE) is not None]
    residuals = {1: [], 2: [], 4: []}
    for stream in range(5):
        fine = simulate(make_config(time_steps=1600, stream=stream), decomp, coeffs)
        for factor in residuals:
            obs = fine.subsample(factor)
            dt = obs.time_step
            for i in sites:
                theta = grid.block_diffusivity(i, PROFILE)
                drift = theta * np.concatenate([[0.0], np.cumsum(obs.laplacian_values[i - 1, :-1])]) * dt
                noise = np.concatenate([[0.0], np.cumsum(obs.brownian[i - 1])])
                residuals[factor].append(np.max(np.abs(obs.values[i - 1] - drift - noise)))
    coarse, middle, finest = (float(np.mean(residuals[f])) for f in (4, 2, 1))
    print(f"📊 Mean max residual: {coarse:.3e} -> {middle:.3e} -> {finest:.3e}")
    assert finest < middle < coarse
    assert finest < 0.7 * coarse
    print("✓ Residual decreases with the time step")


def test_second_moment_matches_closed_form():
    print("🔍 Testing E[X_i(T)^2] against the closed form")
    decomp, coeffs = setup()
    replicates = 300
    finals = np.empty((replicates, 5))
    for r in range(replicates):
        obs = simulate(make_config(stream=r, export_brownian=False), decomp, coeffs)
        finals[r] = obs.values[:, -1]
    for i in range(5):
        expected = expected_second_moment(decomp.eigenvalues, coeffs.a[i], 1.0)
        sq = finals[:, i] ** 2
        se = sq.std(ddof=1) / np.sqrt(replicates)
        assert abs(sq.mean() - expected) < 4.0 * se
    print("✓ Empirical second moments within 4 SE")


def test_csv_round_trip_is_exact(tmp_path):
    decomp, coeffs = setup()
    obs = simulate(make_config(), decomp, coeffs)
    path = dump_observations(obs, tmp_path / "obs.csv")
    first_line = path.read_text().splitlines()[0]
    assert first_line.startswith("# config: ")

    loaded = load_observations(path)
    assert loaded.config == obs.config
    assert np.array_equal(loaded.values, obs.values)
    assert np.array_equal(loaded.laplacian_values, obs.laplacian_values)
    assert np.array_equal(loaded.drift_values, obs.drift_values)
    assert np.array_equal(loaded.brownian, obs.brownian)

    again = dump_observations(loaded, tmp_path / "again.csv")
    assert again.read_bytes() == path.read_bytes()


def test_npz_round_trip_keeps_brownian(tmp_path):
    decomp, coeffs = setup()
    obs = simulate(make_config(), decomp, coeffs)
    loaded = load_observations(dump_observations(obs, tmp_path / "obs.npz"))
    assert loaded.has_brownian
    assert np.array_equal(loaded.brownian, obs.brownian)
    assert loaded.config == obs.config
    assert np.array_equal(loaded.drift_values, obs.drift_values)

    bare = simulate(make_config(export_brownian=False), decomp, coeffs)
    reloaded = load_observations(dump_observations(bare, tmp_path / "bare.csv"))
    assert not reloaded.has_brownian
    assert reloaded.has_drift


if __name__ == "__main__":
    import tempfile

    print("Simulation - Component Testing")
    print("=" * 50)
    test_config_validation()
    test_transition_law()
    test_noise_is_keyed_by_mode_and_step()
    test_simulation_is_deterministic()
    test_chunking_and_truncation_share_the_noise()
    test_brownian_export_matches_regeneration()
    test_euler_scheme_stability_check()
    test_subsample_keeps_the_path()
    test_exact_scheme_is_a_semimartingale_under_refinement()
    test_second_moment_matches_closed_form()
    with tempfile.TemporaryDirectory() as tmp:
        test_csv_round_trip_is_exact(Path(tmp))
        test_npz_round_trip_keeps_brownian(Path(tmp))
    print("\n🎉 All simulation tests passed!")
