"""Measurement kernels, their rescaled translates and the observation grid."""

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

from spectrum.models import DiffusivityProfile, IndexOutOfRange


class QuadratureNonConvergence(RuntimeError):
    """Kernel/eigenfunction inner products did not stabilise under panel refinement."""


class KernelFamily(str, Enum):
    """Supported kernel shapes, all supported in [-1/2, 1/2]."""
    POLYNOMIAL = "polynomial"
    BUMP = "bump"


class MeasurementKernel(BaseModel):
    """Unit-norm kernel K supported in [-1/2, 1/2] whose zero extension is C^2.

    The polynomial family is K(x) = c (1 - 4x^2)^p with p >= 3; the bump family is
    c exp(-1/(1 - 4x^2)), smooth to all orders.
    """

    model_config = ConfigDict(frozen=True)

    family: KernelFamily = Field(default=KernelFamily.POLYNOMIAL, description="Kernel shape")
    degree: int = Field(default=3, ge=3, description="Exponent p of the polynomial family")

    @classmethod
    def bump(cls) -> "MeasurementKernel":
        return cls(family=KernelFamily.BUMP)

    @cached_property
    def base_polynomial(self) -> Polynomial:
        return Polynomial([1.0, 0.0, -4.0]) ** self.degree

    @cached_property
    def normalization(self) -> float:
        """Constant c with ||K||_{L2} = 1."""
        if self.family is KernelFamily.POLYNOMIAL:
            sq = (self.base_polynomial**2).integ()
            return 1.0 / math.sqrt(sq(0.5) - sq(-0.5))
        integral, _ = quad(lambda x: self._bump(x) ** 2, -0.5, 0.5, epsabs=1e-14, epsrel=1e-14)
        return 1.0 / math.sqrt(integral)

    @cached_property
    def derivative_norm_sq(self) -> float:
        """||K'||^2_{L2}, the constant entering every rate and moment formula."""
        if self.family is KernelFamily.POLYNOMIAL:
            sq = (self.base_polynomial.deriv() ** 2).integ()
            return self.normalization**2 * (sq(0.5) - sq(-0.5))
        integral, _ = quad(lambda x: self.d1(x) ** 2, -0.5, 0.5, epsabs=1e-14, epsrel=1e-14)
        return integral

    @staticmethod
    def _bump(x):
        x = np.asarray(x, dtype=float)
        w = 1.0 - 4.0 * x**2
        inside = w > 0.0
        out = np.zeros_like(x)
        out[inside] = np.exp(-1.0 / w[inside])
        return out

    def _evaluate(self, x, order: int):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 0.5
        out = np.zeros_like(x)
        if self.family is KernelFamily.POLYNOMIAL:
            poly = self.base_polynomial.deriv(order) if order else self.base_polynomial
            out[inside] = self.normalization * poly(x[inside])
        else:
            xi = x[inside]
            w = 1.0 - 4.0 * xi**2
            phi = np.exp(-1.0 / w)
            g1 = -8.0 * xi / w**2
            g2 = -8.0 / w**2 - 128.0 * xi**2 / w**3
            factor = (1.0, g1, g2 + g1**2)[order]
            out[inside] = self.normalization * factor * phi
        return out if out.ndim else float(out)

    def value(self, x):
        return self._evaluate(x, 0)

    def d1(self, x):
        return self._evaluate(x, 1)

    def d2(self, x):
        return self._evaluate(x, 2)


def kernel_value(x, kernel: Optional[MeasurementKernel] = None):
    return (kernel or MeasurementKernel()).value(x)


def kernel_d1(x, kernel: Optional[MeasurementKernel] = None):
    return (kernel or MeasurementKernel()).d1(x)


def kernel_d2(x, kernel: Optional[MeasurementKernel] = None):
    return (kernel or MeasurementKernel()).d2(x)


class MeasurementGrid(BaseModel):
    """n equidistant, non-overlapping observation windows of width delta = 1/n."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, description="Number of measurement sites")
    kernel: MeasurementKernel = Field(default_factory=MeasurementKernel, description="Kernel shape")

    @property
    def delta(self) -> float:
        return 1.0 / self.n

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(1, self.n + 1) - 0.5) / self.n

    def center(self, i: int) -> float:
        self._check(i)
        return (i - 0.5) / self.n

    def site_support(self, i: int) -> Tuple[float, float]:
        self._check(i)
        return ((i - 1) / self.n, i / self.n)

    def k_bullet(self, profile: DiffusivityProfile) -> int:
        """Index of the block containing tau: ceil(tau / delta)."""
        return int(math.ceil(round(profile.tau * self.n, 9)))

    def block_diffusivity(self, i: int, profile: DiffusivityProfile) -> Optional[float]:
        """theta on the whole support of K_{delta,i}, or None for the change point block."""
        self._check(i)
        k = self.k_bullet(profile)
        if i < k:
            return profile.theta_minus
        if i > k:
            return profile.theta_plus
        return None

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"site {i} not in [1, {self.n}]")


@dataclass(frozen=True)
class ScaledKernel:
    """K_{delta,i}(x) = delta^{-1/2} K((x - x_i)/delta) and its derivatives."""

    kernel: MeasurementKernel
    center: float
    delta: float

    def value(self, x):
        return self.kernel.value((np.asarray(x, dtype=float) - self.center) / self.delta) / math.sqrt(self.delta)

    def gradient(self, x):
        return self.kernel.d1((np.asarray(x, dtype=float) - self.center) / self.delta) * self.delta**-1.5

    def laplacian(self, x):
        return self.kernel.d2((np.asarray(x, dtype=float) - self.center) / self.delta) * self.delta**-2.5

    @property
    def support(self) -> Tuple[float, float]:
        return (self.center - self.delta / 2.0, self.center + self.delta / 2.0)

    @property
    def gradient_norm_sq(self) -> float:
        return self.kernel.derivative_norm_sq / self.delta**2


def scaled_kernel(grid: MeasurementGrid, i: int) -> ScaledKernel:
    return ScaledKernel(kernel=grid.kernel, center=grid.center(i), delta=grid.delta)
