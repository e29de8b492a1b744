"""
Propagators
Exact linear flows: Coriolis (inertial waves), heat semigroup, and their product
"""

from typing import Union

import numpy as np
from loguru import logger

from spectral.errors import ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.grid import Grid
from rotation.projections import leray_project, unit_cross, wave_split

Field = Union[SpectralScalarField, SpectralVectorField]


def rotation_phase(grid: Grid, omega: float, t: float) -> np.ndarray:
    """theta(xi) = omega t xi_3/|xi| (0 at xi = 0 and on the Nyquist planes)"""
    return omega * t * grid.vertical_ratio


def coriolis_propagator(v: SpectralVectorField, omega: float, t: float) -> SpectralVectorField:
    """
    e^{+i theta} P+ v + e^{-i theta} P- v with theta = omega t xi_3/|xi|

    Evaluated in the equivalent real form cos(theta) P v - sin(theta) xi_hat x P v,
    the exact solution of d_t u + P(omega e3 x u) = 0. An L^2 isometry.
    """
    pv = leray_project(v)
    theta = rotation_phase(v.grid, omega, t)
    return pv.with_coeffs(np.cos(theta) * pv.coeffs - np.sin(theta) * unit_cross(v.grid, pv.coeffs))


def coriolis_propagator_helical(v: SpectralVectorField, omega: float, t: float) -> SpectralVectorField:
    """The same flow assembled from the helical components, for cross-checking"""
    split = wave_split(v)
    theta = rotation_phase(v.grid, omega, t)
    return split.plus.with_coeffs(np.exp(1j * theta) * split.plus.coeffs + np.exp(-1j * theta) * split.minus.coeffs)


def heat_multiplier(grid: Grid, nu: float, t: float) -> np.ndarray:
    if nu < 0:
        raise ValidationFailure(f"diffusivity must be nonnegative, got {nu}")
    if t < 0:
        raise ValidationFailure(f"heat flow time must be nonnegative, got {t}")
    return np.exp(-nu * t * grid.xi_squared)


def heat_propagator(v: Field, nu: float, t: float) -> Field:
    """e^{nu t Laplacian}: multiplier exp(-nu t |xi|^2)"""
    return v.with_coeffs(v.coeffs * heat_multiplier(v.grid, nu, t))


class LinearPropagator:
    """
    Combined heat and Coriolis flow over a fixed step h

    E(h) v = exp(-nu h |xi|^2) (cos(theta) v - sin(theta) xi_hat x v),
    theta = omega h xi_3/|xi|. Both symbol arrays are real and even in xi,
    so Hermitian symmetry is preserved. Inputs are assumed divergence-free
    and Nyquist-free (the solver state always is).
    """

    def __init__(self, grid: Grid, omega: float, nu: float, h: float):
        self.grid = grid
        self.omega = float(omega)
        self.nu = float(nu)
        self.h = float(h)

        damping = heat_multiplier(grid, nu, h)
        theta = rotation_phase(grid, omega, h)
        self._cos = damping * np.cos(theta)
        # sin(theta) * xi_hat, one array per component
        self._sin_unit = damping * np.sin(theta) * grid.xi_unit

        logger.debug(f"Linear propagator ready: omega={omega:g}, nu={nu:g}, h={h:g}")

    def apply_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        s1, s2, s3 = self._sin_unit
        a1, a2, a3 = coeffs
        rotated = np.stack([s2 * a3 - s3 * a2, s3 * a1 - s1 * a3, s1 * a2 - s2 * a1])
        return self._cos * coeffs - rotated

    def __call__(self, v: SpectralVectorField) -> SpectralVectorField:
        if v.grid != self.grid:
            raise ValidationFailure(f"grid mismatch: {v.grid} vs {self.grid}")
        return v.with_coeffs(self.apply_coeffs(v.coeffs))

    def __repr__(self) -> str:
        return f"LinearPropagator(omega={self.omega:g}, nu={self.nu:g}, h={self.h:g})"
