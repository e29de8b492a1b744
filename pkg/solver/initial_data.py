"""
Initial Data
Generators for mean-zero, divergence-free, dealiased starting fields
"""

from typing import Any, Dict, Optional, Sequence

import numpy as np
from loguru import logger

from spectral.errors import ValidationFailure
from spectral.fields import SpectralVectorField
from spectral.grid import Grid
from spectral.operators import dealias, lp_norm
from besov.ensembles import random_vector
from rotation.projections import helical_mode, leray_project


def _normalized(u: SpectralVectorField, l2: Optional[float]) -> SpectralVectorField:
    if l2 is None:
        return u
    energy = u.energy()
    if energy == 0.0:
        raise ValidationFailure("cannot normalize a zero field")
    return u * (l2 / energy)


def taylor_green(grid: Grid, amplitude: float = 1.0, l2: Optional[float] = None) -> SpectralVectorField:
    """
    u = A (sin x cos y cos z, -cos x sin y cos z, 0), coordinates scaled by 2 pi / L
    """
    x, y, z = grid.mesh() * (2.0 * np.pi / grid.box_size)
    values = amplitude * np.stack([
        np.sin(x) * np.cos(y) * np.cos(z),
        -np.cos(x) * np.sin(y) * np.cos(z),
        np.zeros_like(x),
    ])
    u = SpectralVectorField.from_physical(values, grid)
    # exact zeros off the (+-1, +-1, +-1) modes
    u = u.with_coeffs(np.where(np.abs(u.coeffs) > 1e-14 * amplitude, u.coeffs, 0.0))
    return _normalized(u, l2)


def beltrami(grid: Grid, modes: Sequence[Sequence[int]] = ((1, 0, 1),), sign: int = 1,
             amplitude: float = 1.0, l2: Optional[float] = None) -> SpectralVectorField:
    """
    Sum of helical modes with a common helicity sign

    A single mode is an exact steady solution of the non-rotating Euler
    equations and an exact inertial wave of the rotating ones.
    """
    if not modes:
        raise ValidationFailure("beltrami data needs at least one mode")
    u = SpectralVectorField.zeros(grid)
    for k in modes:
        u = u + helical_mode(grid, k, sign=sign, amplitude=amplitude)
    return _normalized(u, l2)


def random_solenoidal(grid: Grid, seed: int = 0, k0: float = 3.0, l2: Optional[float] = 1.0) -> SpectralVectorField:
    """
    Seeded divergence-free field with spectrum E(k) ~ k^4 exp(-2 k^2 / k0^2)
    """
    rng = np.random.default_rng(seed)
    u = leray_project(random_vector(grid, rng, k0=k0))
    return _normalized(u, l2)


GENERATORS = {
    "taylor-green": taylor_green,
    "beltrami": beltrami,
    "random": random_solenoidal,
}


def generate(grid: Grid, generator: str, params: Optional[Dict[str, Any]] = None) -> SpectralVectorField:
    """
    Build initial data by generator id

    Args:
        grid: target grid
        generator: one of taylor-green, beltrami, random
        params: keyword arguments forwarded to the generator

    Returns:
        Mean-zero, divergence-free, Nyquist-free and dealiased field
    """
    if generator not in GENERATORS:
        raise ValidationFailure(f"unknown initial-data generator {generator!r}; choose from {sorted(GENERATORS)}")
    u = GENERATORS[generator](grid, **(params or {}))
    u = dealias(leray_project(u))
    logger.debug(f"Initial data {generator}: energy={u.energy():.6g}, sup={lp_norm(u, np.inf):.6g}")
    return u
