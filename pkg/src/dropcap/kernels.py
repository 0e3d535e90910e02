"""Riesz and logarithmic interaction kernels with reference self-energies.

The pairwise interaction between unit charges at x and y in R^dim is

    k(x, y) = |x - y|^(alpha - dim)      for 0 < alpha < dim,
    k(x, y) = -log |x - y|               for alpha == dim.

Energies are full double integrals, I(mu, nu) = integral of k d(mu x nu),
with no 1/2 factor.  All reference self-energies below follow the same
convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import ValidationError

__all__ = [
    "KernelParams",
    "kernel_eval",
    "kernel_of_distance",
    "unit_sphere_area",
    "unit_ball_volume",
    "uniform_ball_self_energy",
    "unit_cube_self_energy",
    "DISK_SELF_ENERGY_COEFF",
    "SEGMENT_SELF_ENERGY_SHIFT",
]

# Self-energy of a uniformly charged unit-charge disk of radius a under the
# 1/r kernel is DISK_SELF_ENERGY_COEFF / a (full double integral).
DISK_SELF_ENERGY_COEFF = 16.0 / (3.0 * np.pi)

# Self-energy of a uniform unit-charge segment of length l under -log r is
# -log(l) + SEGMENT_SELF_ENERGY_SHIFT.
SEGMENT_SELF_ENERGY_SHIFT = 1.5


def unit_sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere S^{dim-1} in R^dim (4*pi for dim 3)."""
    return float(2.0 * np.pi ** (0.5 * dim) / special.gamma(0.5 * dim))


def unit_ball_volume(dim: int) -> float:
    """Lebesgue volume of the unit ball in R^dim."""
    return float(np.pi ** (0.5 * dim) / special.gamma(0.5 * dim + 1.0))


@dataclass(frozen=True)
class KernelParams:
    """Kernel parameters: ambient dimension and interaction exponent.

    alpha must lie in (0, dim]; alpha == dim selects the logarithmic kernel.
    """

    dim: int
    alpha: float

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or self.dim < 2:
            raise ValidationError(f"dim must be an integer >= 2, got {self.dim!r}")
        if not 0.0 < self.alpha <= self.dim:
            raise ValidationError(
                f"alpha must lie in (0, dim] = (0, {self.dim}], got {self.alpha}"
            )

    @property
    def is_log(self) -> bool:
        return self.alpha == self.dim

    @property
    def pde_constant(self) -> float:
        """Normalization (dim - 2) * |S^{dim-1}| of the alpha = 2 kernel.

        4*pi in three dimensions.  Only defined in the Coulombic case.
        """
        if self.alpha != 2:
            raise ValidationError("pde_constant is defined only for alpha = 2")
        return (self.dim - 2) * unit_sphere_area(self.dim)


def kernel_of_distance(params: KernelParams, r):
    """Kernel value as a function of separation distance (vectorized)."""
    r = np.asarray(r, dtype=float)
    if params.is_log:
        return -np.log(r)
    return r ** (params.alpha - params.dim)


def kernel_eval(params: KernelParams, x, y) -> float:
    """Pair interaction between unit charges at points x and y.

    Raises for coincident points, where the kernel is singular.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (params.dim,) or y.shape != (params.dim,):
        raise ValidationError(
            f"points must have shape ({params.dim},), got {x.shape} and {y.shape}"
        )
    r = float(np.linalg.norm(x - y))
    if r == 0.0:
        raise ValidationError("kernel is singular at coincident points")
    return float(kernel_of_distance(params, r))


def _ball_distance_pdf(dim: int, r):
    """Density of |X - Y| for X, Y independent uniform in the unit ball."""
    r = np.asarray(r, dtype=float)
    x = np.clip(1.0 - 0.25 * r * r, 0.0, 1.0)
    return dim * r ** (dim - 1) * special.betainc(0.5 * (dim + 1), 0.5, x)


@lru_cache(maxsize=None)
def uniform_ball_self_energy(dim: int, alpha: float) -> float:
    """Self-energy of the uniform unit-mass measure on the unit ball.

    Radial quadrature of the kernel against the exact distance
    distribution of two uniform points in the ball.  Equals 6/5 for
    (dim, alpha) = (3, 2) and 1/4 for the planar logarithmic disk.
    """
    params = KernelParams(dim, alpha)

    def integrand(r):
        return kernel_of_distance(params, r) * _ball_distance_pdf(dim, r)

    val, _ = integrate.quad(integrand, 0.0, 2.0, limit=200)
    return float(val)


@lru_cache(maxsize=None)
def unit_cube_self_energy(n_angle: int = 400) -> float:
    """1/r self-energy of the uniform unit-charge measure on the unit cube.

    Octant reduction: with delta = x - y distributed with density
    prod(1 - |delta_i|) on [-1, 1]^3, pass to spherical coordinates so the
    radial integral is a polynomial and the integrand is bounded.
    """
    x, wq = np.polynomial.legendre.leggauss(n_angle)
    th = 0.25 * np.pi * (x + 1.0)
    wth = 0.25 * np.pi * wq
    TH, LM = np.meshgrid(th, th, indexing="ij")
    W = np.outer(wth, wth) * np.sin(TH)
    w1 = np.sin(TH) * np.cos(LM)
    w2 = np.sin(TH) * np.sin(LM)
    w3 = np.cos(TH)
    T = 1.0 / np.maximum(np.maximum(w1, w2), w3)
    e1 = w1 + w2 + w3
    e2 = w1 * w2 + w1 * w3 + w2 * w3
    e3 = w1 * w2 * w3
    radial = T**2 / 2.0 - e1 * T**3 / 3.0 + e2 * T**4 / 4.0 - e3 * T**5 / 5.0
    return float(8.0 * np.sum(W * radial))
