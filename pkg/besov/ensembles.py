"""
Random Ensembles
Seeded random fields used by the inequality verifiers
"""

from typing import List, Optional

import numpy as np

from spectral.errors import ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.grid import Grid, conjugate_partner
from besov.partition import DyadicPartition


def hermitian_part(coeffs: np.ndarray) -> np.ndarray:
    """Project coefficients onto the real-field subspace c(-k) = conj(c(k))"""
    return 0.5 * (coeffs + np.conj(conjugate_partner(coeffs)))


def _noise(grid: Grid, rng: np.random.Generator, ncomp: int = 0) -> np.ndarray:
    shape = grid.shape if ncomp == 0 else (ncomp,) + grid.shape
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _finish(coeffs: np.ndarray, grid: Grid, envelope: np.ndarray) -> np.ndarray:
    coeffs = coeffs * envelope
    coeffs[..., ~grid.dealias_mask] = 0.0
    coeffs[..., grid.nyquist_mask] = 0.0
    coeffs[..., 0, 0, 0] = 0.0
    coeffs = hermitian_part(coeffs)
    norm = np.sqrt(np.sum(np.abs(coeffs) ** 2) * grid.volume)
    if norm == 0.0:
        raise ValidationFailure("random field has no admissible modes on this grid")
    return coeffs / norm


def spectrum_envelope(grid: Grid, k0: float) -> np.ndarray:
    """
    Amplitude envelope for the energy spectrum E(k) ~ k^4 exp(-2 k^2 / k0^2)

    Shell energy scales like 4 pi k^2 |c|^2, so |c| ~ k exp(-k^2 / k0^2).
    """
    k = grid.xi_norm
    return k * np.exp(-(k ** 2) / k0 ** 2)


def random_scalar(grid: Grid, rng: np.random.Generator, k0: Optional[float] = None) -> SpectralScalarField:
    """
    Real, mean-zero scalar field band-limited to the dealiased range, unit L^2 norm

    Args:
        grid: target grid
        rng: numpy generator (the caller owns the seed)
        k0: spectral peak; a flat spectrum over the retained modes when None
    """
    envelope = np.ones(grid.shape) if k0 is None else spectrum_envelope(grid, k0)
    return SpectralScalarField(grid, _finish(_noise(grid, rng), grid, envelope))


def random_vector(grid: Grid, rng: np.random.Generator, k0: Optional[float] = None) -> SpectralVectorField:
    """Three independent random components (not projected), unit L^2 norm"""
    envelope = np.ones(grid.shape) if k0 is None else spectrum_envelope(grid, k0)
    return SpectralVectorField(grid, _finish(_noise(grid, rng, 3), grid, envelope))


def shell_scalar(partition: DyadicPartition, j: int, rng: np.random.Generator) -> SpectralScalarField:
    """Random real field whose spectrum lies in the annulus of shell j"""
    grid = partition.grid
    return SpectralScalarField(grid, _finish(_noise(grid, rng), grid, partition.bump(j)))


def scalar_ensemble(grid: Grid, size: int, seed: int, k0_range=(2.0, 6.0)) -> List[SpectralScalarField]:
    """
    Seeded list of band-limited scalar fields with spectral peaks spread over k0_range
    """
    if size <= 0:
        raise ValidationFailure(f"ensemble size must be positive, got {size}")
    rng = np.random.default_rng(seed)
    peaks = rng.uniform(k0_range[0], k0_range[1], size=size)
    return [random_scalar(grid, rng, k0=float(k0)) for k0 in peaks]


def vector_ensemble(grid: Grid, size: int, seed: int, k0_range=(2.0, 6.0)) -> List[SpectralVectorField]:
    if size <= 0:
        raise ValidationFailure(f"ensemble size must be positive, got {size}")
    rng = np.random.default_rng(seed)
    peaks = rng.uniform(k0_range[0], k0_range[1], size=size)
    return [random_vector(grid, rng, k0=float(k0)) for k0 in peaks]


def shell_ensemble(partition: DyadicPartition, size: int, seed: int, shells=None) -> List[tuple]:
    """
    Seeded list of (j, field) pairs cycling over the interior shells
    """
    if size <= 0:
        raise ValidationFailure(f"ensemble size must be positive, got {size}")
    if shells is None:
        shells = interior_shells(partition)
    rng = np.random.default_rng(seed)
    return [(j, shell_scalar(partition, j, rng)) for j in (shells[i % len(shells)] for i in range(size))]


def interior_shells(partition: DyadicPartition) -> List[int]:
    """Shells centred inside the dealiased range whose annulus starts at or above the lowest mode"""
    grid = partition.grid
    top = grid.dealias_cutoff * grid.min_frequency
    shells = [j for j in partition.shells if 2.0 ** (j - 1) >= grid.min_frequency and 2.0 ** j <= top]
    if not shells:
        raise ValidationFailure(f"no interior dyadic shells on {grid}")
    return shells
