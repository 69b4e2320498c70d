"""Pydantic models and records for the divergence-form operator and its spectrum."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SpectrumError(RuntimeError):
    """Base class for failures of the eigen-decomposition."""


class BracketingFailure(SpectrumError):
    """The root scan could not isolate the requested number of eigenvalues."""


class SingularMatrix(SpectrumError):
    """The finite element system is singular or too coarse for the request."""


class IndexOutOfRange(IndexError):
    """A mode or site index lies outside the available range."""


BAND_MARGIN = 2.0


class DiffusivityProfile(BaseModel):
    """Piecewise constant diffusivity with a single jump at tau."""

    model_config = ConfigDict(frozen=True)

    theta_minus: float = Field(gt=0.0, description="Diffusivity left of the change point")
    theta_plus: float = Field(gt=0.0, description="Diffusivity right of the change point")
    tau: float = Field(gt=0.0, lt=1.0, description="Change point location in (0, 1)")
    theta_lo: Optional[float] = Field(
        default=None, gt=0.0, description="Lower end of the admissible band (default min(theta_minus, theta_plus) / 2)"
    )
    theta_hi: Optional[float] = Field(
        default=None, gt=0.0, description="Upper end of the admissible band (default 2 max(theta_minus, theta_plus))"
    )

    @model_validator(mode="before")
    @classmethod
    def _fill_band(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            # default band strictly contains both diffusivities
            lo = min(data.get("theta_minus", 0.0), data.get("theta_plus", 0.0)) / BAND_MARGIN
            hi = max(data.get("theta_minus", 0.0), data.get("theta_plus", 0.0)) * BAND_MARGIN
            if data.get("theta_lo") is None:
                data["theta_lo"] = lo
            if data.get("theta_hi") is None:
                data["theta_hi"] = hi
        return data

    @model_validator(mode="after")
    def _check_band(self) -> "DiffusivityProfile":
        for name in ("theta_minus", "theta_plus"):
            value = getattr(self, name)
            if not self.theta_lo <= value <= self.theta_hi:
                raise ValueError(
                    f"{name}={value} outside admissible band [{self.theta_lo}, {self.theta_hi}]"
                )
        return self

    @property
    def eta(self) -> float:
        """Jump height theta_plus - theta_minus (may be zero or negative)."""
        return self.theta_plus - self.theta_minus

    @property
    def band(self) -> Tuple[float, float]:
        return (self.theta_lo, self.theta_hi)

    @property
    def is_constant(self) -> bool:
        return self.theta_minus == self.theta_plus

    def theta_at(self, x):
        """Diffusivity at x; the jump point itself belongs to the right piece."""
        x = np.asarray(x, dtype=float)
        return np.where(x < self.tau, self.theta_minus, self.theta_plus)

    def mirrored(self) -> "DiffusivityProfile":
        """Profile of x -> 1 - x: sides swapped, tau reflected."""
        return DiffusivityProfile(
            theta_minus=self.theta_plus,
            theta_plus=self.theta_minus,
            tau=1.0 - self.tau,
            theta_lo=self.theta_lo,
            theta_hi=self.theta_hi,
        )


@dataclass(frozen=True)
class SpectralDecomposition:
    """First M eigenpairs of -d/dx theta d/dx with Dirichlet boundary.

    Each eigenfunction is A_k sin(omega_minus x) on (0, tau) and
    B_k sin(omega_plus (1 - x)) on (tau, 1), L2-normalised with e_k'(0) > 0.
    """

    eigenvalues: np.ndarray
    amp_left: np.ndarray
    amp_right: np.ndarray
    profile: DiffusivityProfile
    fem_modes: Tuple[int, ...] = field(default=())

    @property
    def mode_count(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def omega_minus(self) -> np.ndarray:
        return np.sqrt(self.eigenvalues / self.profile.theta_minus)

    @property
    def omega_plus(self) -> np.ndarray:
        return np.sqrt(self.eigenvalues / self.profile.theta_plus)

    def truncated(self, mode_count: int) -> "SpectralDecomposition":
        if not 1 <= mode_count <= self.mode_count:
            raise IndexOutOfRange(f"mode_count {mode_count} not in [1, {self.mode_count}]")
        return SpectralDecomposition(
            eigenvalues=self.eigenvalues[:mode_count],
            amp_left=self.amp_left[:mode_count],
            amp_right=self.amp_right[:mode_count],
            profile=self.profile,
            fem_modes=tuple(k for k in self.fem_modes if k <= mode_count),
        )

    def evaluate_all(self, x, modes: Optional[int] = None, start: int = 0) -> np.ndarray:
        """Matrix E[k, j] = e_{start+k+1}(x_j) for modes start+1 .. `modes`."""
        m = self.mode_count if modes is None else modes
        rows = slice(start, m)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        left = x < self.profile.tau
        out = np.empty((m - start, x.shape[0]))
        wm = self.omega_minus[rows, None]
        wp = self.omega_plus[rows, None]
        out[:, left] = self.amp_left[rows, None] * np.sin(wm * x[None, left])
        out[:, ~left] = self.amp_right[rows, None] * np.sin(wp * (1.0 - x[None, ~left]))
        return out

    def derivative_all(self, x, modes: Optional[int] = None) -> np.ndarray:
        """Matrix of e_k'(x_j); at x = tau the right-hand derivative is returned."""
        m = self.mode_count if modes is None else modes
        x = np.atleast_1d(np.asarray(x, dtype=float))
        left = x < self.profile.tau
        out = np.empty((m, x.shape[0]))
        wm = self.omega_minus[:m, None]
        wp = self.omega_plus[:m, None]
        out[:, left] = self.amp_left[:m, None] * wm * np.cos(wm * x[None, left])
        out[:, ~left] = -self.amp_right[:m, None] * wp * np.cos(wp * (1.0 - x[None, ~left]))
        return out

    def flux_residuals(self) -> np.ndarray:
        """|theta_- e'(tau-) - theta_+ e'(tau+)| per mode, relative to max |e'|."""
        p = self.profile
        wm, wp = self.omega_minus, self.omega_plus
        left = p.theta_minus * self.amp_left * wm * np.cos(wm * p.tau)
        right = -p.theta_plus * self.amp_right * wp * np.cos(wp * (1.0 - p.tau))
        scale = np.maximum(np.abs(self.amp_left) * wm, np.abs(self.amp_right) * wp)
        return np.abs(left - right) / scale

    def continuity_residuals(self) -> np.ndarray:
        p = self.profile
        left = self.amp_left * np.sin(self.omega_minus * p.tau)
        right = self.amp_right * np.sin(self.omega_plus * (1.0 - p.tau))
        return np.abs(left - right)


@dataclass(frozen=True)
class FemSpectrum:
    """Generalised eigenpairs of the P1 stiffness/mass pencil on a uniform mesh."""

    eigenvalues: np.ndarray
    nodes: np.ndarray
    vectors: np.ndarray
    profile: DiffusivityProfile

    @property
    def mode_count(self) -> int:
        return int(self.eigenvalues.shape[0])

    def evaluate(self, k: int, x):
        if not 1 <= k <= self.mode_count:
            raise IndexOutOfRange(f"mode {k} not in [1, {self.mode_count}]")
        return np.interp(x, self.nodes, self.vectors[k - 1])
