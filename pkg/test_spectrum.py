#!/usr/bin/env python3
"""
Tests for the eigenpairs of -Δθ with a piecewise constant diffusivity.
"""

import itertools
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

sys.path.insert(0, str(Path(__file__).parent))

from spectrum import (
    DiffusivityProfile,
    IndexOutOfRange,
    characteristic_value,
    comparison_bounds,
    composite_gauss_legendre,
    decompose,
    evaluate_eigenfunction,
    fem_oracle,
    inverse_apply_second_derivative,
    lambda_lower_bound,
    polish_eigenvalue,
    spectral_inverse_second_derivative,
)


def test_constant_profile_matches_sine_series():
    """θ = c gives λ_k = c π² k² and e_k = √2 sin(kπx)."""
    print("🔍 Testing constant profile")
    for c in (1.0, 2.5):
        profile = DiffusivityProfile(theta_minus=c, theta_plus=c, tau=0.5)
        decomp = decompose(profile, 20)
        k = np.arange(1, 21)
        expected = c * math.pi**2 * k**2
        assert np.allclose(decomp.eigenvalues, expected, rtol=1e-10, atol=0.0)

        x = np.linspace(0.05, 0.95, 7)
        for mode in (1, 4, 13):
            values = evaluate_eigenfunction(decomp, mode, x)
            assert np.allclose(values, math.sqrt(2.0) * np.sin(mode * math.pi * x), atol=1e-8)
    print("✓ Constant profile eigenpairs match the sine series")


@pytest.mark.parametrize("theta_minus,theta_plus,tau", [
    (1.0, 2.0, 0.35),
    (2.0, 1.0, 0.5),
    (0.5, 4.0, 0.2),
    (3.0, 0.25, 0.8),
])
def test_piecewise_profile_agrees_with_fem(theta_minus, theta_plus, tau):
    profile = DiffusivityProfile(theta_minus=theta_minus, theta_plus=theta_plus, tau=tau)
    decomp = decompose(profile, 10)
    fem = fem_oracle(profile, cells=8000, mode_count=10)
    assert np.allclose(decomp.eigenvalues, fem.eigenvalues, rtol=1e-4)



@pytest.mark.parametrize(
    "theta_minus,theta_plus,tau",
    list(itertools.product([0.5, 1.0, 2.0, 4.0], [0.5, 1.0, 2.0, 4.0], [0.3, 0.5, 1.0 / 3.0])),
)
def test_first_fifty_modes_agree_with_fem(theta_minus, theta_plus, tau):
    """30000 cells put every jump location on a node."""
    profile = DiffusivityProfile(theta_minus=theta_minus, theta_plus=theta_plus, tau=tau)
    decomp = decompose(profile, 50)
    fem = fem_oracle(profile, cells=30_000, mode_count=50)
    assert np.allclose(decomp.eigenvalues, fem.eigenvalues, rtol=1e-4, atol=0.0)

def test_eigenvalues_are_roots_of_the_characteristic_function():
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    lam = decompose(profile, 12).eigenvalues
    scale = profile.theta_plus * np.sqrt(lam / profile.theta_minus)
    assert np.all(np.abs(characteristic_value(lam, profile)) < 1e-8 * scale)
    # simple roots: F changes sign across each eigenvalue
    left = characteristic_value(lam * (1.0 - 1e-6), profile)
    right = characteristic_value(lam * (1.0 + 1e-6), profile)
    assert np.all(left * right < 0.0)
    assert isinstance(characteristic_value(1.0, profile), float)



def test_polishing_recovers_a_perturbed_root():
    print("🔍 Testing eigenvalue polishing")
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    lam = decompose(profile, 8).eigenvalues
    for k in (0, 4, 7):
        s = math.sqrt(lam[k])
        polished = polish_eigenvalue(profile, lam[k] * (1.0 + 1e-8), radius=1e-3 * s)
        assert polished == pytest.approx(lam[k], rel=1e-10)
    # no root within reach: the value comes back unchanged
    middle = 0.5 * (lam[3] + lam[4])
    assert polish_eigenvalue(profile, middle, radius=1e-6 * math.sqrt(middle)) == middle
    print("✓ Perturbed roots polished back")

def test_eigenvalues_inside_comparison_bounds():
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    decomp = decompose(profile, 50)
    assert np.all(np.diff(decomp.eigenvalues) > 0.0)
    for k, lam in enumerate(decomp.eigenvalues, start=1):
        lo, hi = comparison_bounds(profile, k)
        assert lo * (1 - 1e-9) <= lam <= hi * (1 + 1e-9)


def test_transmission_conditions_and_normalisation():
    """Continuity of e_k and of the flux θ e_k' at τ, unit L2 norm, e_k'(0) > 0."""
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=3.0, tau=0.4)
    decomp = decompose(profile, 30)
    assert np.max(decomp.continuity_residuals()) < 1e-8
    assert np.max(decomp.flux_residuals()) < 1e-8

    nodes, weights = composite_gauss_legendre([0.0, profile.tau, 1.0], 64, 16)
    values = decomp.evaluate_all(nodes)
    gram = (values * weights) @ values.T
    assert np.allclose(gram, np.eye(30), atol=1e-9)

    slopes = decomp.derivative_all(np.array([0.0]))[:, 0]
    assert np.all(slopes > 0.0)


def test_mirrored_profile_has_same_spectrum():
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.3)
    a = decompose(profile, 15).eigenvalues
    b = decompose(profile.mirrored(), 15).eigenvalues
    assert np.allclose(a, b, rtol=1e-10)


def test_lambda_lower_bound_is_first_eigenvalue():
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)
    lam1 = lambda_lower_bound(profile)
    assert math.pi**2 * 1.0 <= lam1 <= math.pi**2 * 2.0
    assert lam1 == pytest.approx(decompose(profile, 3).eigenvalues[0], rel=1e-10)


def test_inverse_of_second_derivative_matches_spectral_series():
    profile = DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.35)

    def f(x):
        return np.asarray(x) ** 2 * (1.0 - np.asarray(x)) ** 2

    def f_second(x):
        return 2.0 - 12.0 * x + 12.0 * x**2

    x = np.array([0.1, 0.3, 0.5, 0.9])
    closed = inverse_apply_second_derivative(profile, f, x)
    decomp = decompose(profile, 300)
    series = spectral_inverse_second_derivative(decomp, f_second, x)
    assert np.allclose(closed, series, atol=1e-4)
    # Constant θ reduces to f / θ.
    flat = DiffusivityProfile(theta_minus=2.0, theta_plus=2.0, tau=0.5)
    assert np.allclose(inverse_apply_second_derivative(flat, f, x), f(x) / 2.0)


def test_invalid_profiles_and_indices():
    with pytest.raises(ValidationError):
        DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=1.0)
    with pytest.raises(ValidationError):
        DiffusivityProfile(theta_minus=-1.0, theta_plus=2.0, tau=0.5)
    with pytest.raises(ValidationError):
        DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.5, theta_lo=1.5)

    decomp = decompose(DiffusivityProfile(theta_minus=1.0, theta_plus=2.0, tau=0.5), 5)
    with pytest.raises(IndexOutOfRange):
        evaluate_eigenfunction(decomp, 6, 0.5)
    with pytest.raises(ValueError):
        decompose(decomp.profile, 0)


if __name__ == "__main__":
    print("Spectrum - Component Testing")
    print("=" * 50)
    test_constant_profile_matches_sine_series()
    test_piecewise_profile_agrees_with_fem(1.0, 2.0, 0.35)
    test_first_fifty_modes_agree_with_fem(0.5, 4.0, 1.0 / 3.0)
    test_eigenvalues_are_roots_of_the_characteristic_function()
    test_polishing_recovers_a_perturbed_root()
    test_eigenvalues_inside_comparison_bounds()
    test_transmission_conditions_and_normalisation()
    test_mirrored_profile_has_same_spectrum()
    test_lambda_lower_bound_is_first_eigenvalue()
    test_inverse_of_second_derivative_matches_spectral_series()
    test_invalid_profiles_and_indices()
    print("\n🎉 All spectrum tests passed!")
