"""
Dyadic Partition
Smooth Littlewood-Paley partition of unity sampled on the grid frequencies
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

import numpy as np
from loguru import logger

from spectral.errors import ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.grid import Grid

Field = Union[SpectralScalarField, SpectralVectorField]

MIN_GRID_POINTS = 16


def _flat_exp(x: np.ndarray) -> np.ndarray:
    """exp(-1/x) for x > 0, exactly 0 otherwise (C-infinity at 0)"""
    x = np.asarray(x, dtype=np.float64)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, np.exp(-1.0 / safe), 0.0)


def low_pass_profile(rho: np.ndarray) -> np.ndarray:
    """
    Radial profile of the low-pass symbol: 1 on [0, 1], 0 on [2, inf), smooth between
    """
    rho = np.asarray(rho, dtype=np.float64)
    up = _flat_exp(2.0 - rho)
    down = _flat_exp(rho - 1.0)
    return up / (up + down)


def bump_profile(rho: np.ndarray) -> np.ndarray:
    """phi_0(rho) = S(rho) - S(2 rho), supported in [1/2, 2] and equal to 1 at rho = 1"""
    return low_pass_profile(rho) - low_pass_profile(2.0 * rho)


@dataclass(frozen=True, eq=False)
class DyadicPartition:
    """
    Dyadic blocks phi_j, low-pass psi = S_0 and S_k evaluated on one grid

    The bumps telescope, so sum_{j=j_min..j_max} phi_j = 1 on every grid
    frequency with 2^j_min <= |xi| <= 2^j_max, which is every nonzero grid
    frequency by the choice of the range.
    """
    grid: Grid
    j_min: int
    j_max: int
    bumps: Dict[int, np.ndarray] = field(repr=False)
    psi_hat: np.ndarray = field(repr=False)

    @property
    def shells(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def check_shell(self, j: int) -> int:
        if j not in self.bumps:
            raise ValidationFailure(f"shell j={j} outside partition range [{self.j_min}, {self.j_max}]")
        return j

    def bump(self, j: int) -> np.ndarray:
        return self.bumps[self.check_shell(j)]

    def shell_bounds(self, j: int) -> Tuple[float, float]:
        """Annulus 2^(j-1) <= |xi| <= 2^(j+1) containing the support of phi_j"""
        return 2.0 ** (j - 1), 2.0 ** (j + 1)

    def low_pass_symbol(self, k: int) -> np.ndarray:
        """S_k(xi) = S(2^-k |xi|), supported in |xi| <= 2^(k+1)"""
        if k > self.j_max:
            raise ValidationFailure(f"low-pass index k={k} exceeds j_max={self.j_max}")
        if k == 0:
            return self.psi_hat
        return low_pass_profile(self.grid.xi_norm * 2.0 ** (-k))

    def covered(self) -> np.ndarray:
        """Grid frequencies on which the partition of unity is asserted"""
        rho = self.grid.xi_norm
        return (rho >= 2.0 ** self.j_min) & (rho <= 2.0 ** self.j_max)

    def unity_residual(self) -> float:
        """max |sum_j phi_j - 1| over the covered frequencies"""
        total = sum(self.bumps.values())
        mask = self.covered()
        return float(np.abs(total[mask] - 1.0).max())

    def low_pass_residual(self) -> float:
        """max |psi - (1 - sum_{j>=1} phi_j)| over frequencies up to 2^j_max"""
        high = sum(b for j, b in self.bumps.items() if j >= 1)
        mask = self.grid.xi_norm <= 2.0 ** self.j_max
        return float(np.abs(self.psi_hat + high - 1.0)[mask].max())


def dyadic_range(grid: Grid) -> Tuple[int, int]:
    """(j_min, j_max) so that [2^j_min, 2^j_max] spans the nonzero grid frequencies"""
    j_min = int(np.floor(np.log2(grid.min_frequency)))
    j_max = int(np.ceil(np.log2(grid.max_frequency)))
    return j_min, j_max


def build_partition(grid: Grid) -> DyadicPartition:
    """
    Sample the dyadic partition on a grid

    Args:
        grid: grid with at least 16 points per axis

    Returns:
        DyadicPartition whose bumps and low-pass symbol satisfy the
        partition-of-unity identities to rounding
    """
    if grid.n < MIN_GRID_POINTS:
        raise ValidationFailure(
            f"grid n={grid.n} cannot host three dyadic shells; need n >= {MIN_GRID_POINTS}"
        )

    j_min, j_max = dyadic_range(grid)
    rho = grid.xi_norm
    bumps = {j: bump_profile(rho * 2.0 ** (-j)) for j in range(j_min, j_max + 1)}
    for arr in bumps.values():
        arr.setflags(write=False)
    psi_hat = low_pass_profile(rho)
    psi_hat.setflags(write=False)

    partition = DyadicPartition(grid=grid, j_min=j_min, j_max=j_max, bumps=bumps, psi_hat=psi_hat)
    logger.debug(f"Dyadic partition built on {grid}: shells {j_min}..{j_max}")
    return partition


# ==================== Block operators ====================

def _check_grid(f: Field, partition: DyadicPartition):
    if f.grid != partition.grid:
        raise ValidationFailure(f"field grid {f.grid} differs from partition grid {partition.grid}")


def lp_block(f: Field, partition: DyadicPartition, j: int) -> Field:
    """Delta_j f: multiply by phi_j (componentwise for vector fields)"""
    _check_grid(f, partition)
    return f.with_coeffs(f.coeffs * partition.bump(j))


def low_pass(f: Field, partition: DyadicPartition, k: int) -> Field:
    """S_k f: multiply by S(2^-k |xi|)"""
    _check_grid(f, partition)
    return f.with_coeffs(f.coeffs * partition.low_pass_symbol(k))


def psi_block(f: Field, partition: DyadicPartition) -> Field:
    """psi * f, the low-frequency part of the inhomogeneous decomposition"""
    _check_grid(f, partition)
    return f.with_coeffs(f.coeffs * partition.psi_hat)
