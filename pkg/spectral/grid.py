"""
Periodic Grid
Discretization of the torus [0, L)^3 and its Fourier lattice
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from spectral.errors import ValidationFailure


def conjugate_partner(values: np.ndarray) -> np.ndarray:
    """
    Re-index an array so that entry k holds the value stored at -k (mod n)

    Works on the last three axes, so component stacks (3, n, n, n) are
    handled as well as plain (n, n, n) arrays.
    """
    axes = (-3, -2, -1)
    return np.roll(np.flip(values, axis=axes), 1, axis=axes)


@dataclass(frozen=True)
class Grid:
    """
    Uniform n^3 collocation grid on the periodic box [0, L)^3

    Frequencies follow the standard FFT ordering 0, 1, ..., n/2-1, -n/2, ..., -1
    and map to physical frequencies xi = 2*pi*k / L. The -n/2 entry is the
    Nyquist row.
    """
    n: int
    box_size: float = 2.0 * np.pi

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 4:
            raise ValidationFailure(f"grid needs n >= 4 points per axis, got {self.n}")
        if self.n & (self.n - 1):
            raise ValidationFailure(f"grid size must be a power of two, got {self.n}")
        if not np.isfinite(self.box_size) or self.box_size <= 0:
            raise ValidationFailure(f"box size must be positive, got {self.box_size}")

    # ==================== Lattice ====================

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers per axis in FFT order"""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).round().astype(np.int64)

    @cached_property
    def nyquist_row(self) -> np.ndarray:
        """Boolean flag per axis entry: True on the -n/2 row"""
        return self.wavenumbers == -(self.n // 2)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Physical frequencies per axis, xi = 2*pi*k/L"""
        return 2.0 * np.pi * self.wavenumbers / self.box_size

    @cached_property
    def xi(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Full (n, n, n) frequency arrays for the three axes"""
        return tuple(np.meshgrid(self.frequencies, self.frequencies, self.frequencies, indexing="ij"))

    @cached_property
    def k_int(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.wavenumbers, self.wavenumbers, self.wavenumbers, indexing="ij"))

    @cached_property
    def xi_squared(self) -> np.ndarray:
        return self.xi[0] ** 2 + self.xi[1] ** 2 + self.xi[2] ** 2

    @cached_property
    def xi_norm(self) -> np.ndarray:
        return np.sqrt(self.xi_squared)

    @cached_property
    def inverse_xi_norm(self) -> np.ndarray:
        """1/|xi| with the zero frequency mapped to 0"""
        with np.errstate(divide="ignore"):
            inv = np.where(self.xi_norm > 0, 1.0 / np.where(self.xi_norm > 0, self.xi_norm, 1.0), 0.0)
        return inv

    @cached_property
    def xi_unit(self) -> np.ndarray:
        """Stack (3, n, n, n) of xi/|xi|, zero at xi = 0 and on Nyquist planes"""
        unit = np.stack([c * self.inverse_xi_norm for c in self.xi])
        unit[:, self.nyquist_mask] = 0.0
        return unit

    @cached_property
    def vertical_ratio(self) -> np.ndarray:
        """Symbol of D3/|D|, i.e. xi_3/|xi|, zero at xi = 0 and on Nyquist planes"""
        return self.xi_unit[2]

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """True wherever any axis sits on its Nyquist row"""
        row = self.nyquist_row
        return row[:, None, None] | row[None, :, None] | row[None, None, :]

    @cached_property
    def dealias_cutoff(self) -> int:
        """Largest retained |k| per axis under the 2/3 rule"""
        return self.n // 3

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """True for modes with every |k_axis| <= n/3"""
        keep = np.abs(self.wavenumbers) <= self.dealias_cutoff
        return keep[:, None, None] & keep[None, :, None] & keep[None, None, :]

    @cached_property
    def zero_mode(self) -> Tuple[int, int, int]:
        return (0, 0, 0)

    @property
    def max_frequency(self) -> float:
        """Largest |xi| present on the grid (Nyquist corner)"""
        return float(self.xi_norm.max())

    @property
    def min_frequency(self) -> float:
        """Smallest nonzero |xi| on the grid"""
        return 2.0 * np.pi / self.box_size

    # ==================== Physical space ====================

    @property
    def spacing(self) -> float:
        return self.box_size / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing ** 3

    @property
    def volume(self) -> float:
        return self.box_size ** 3

    def mesh(self) -> np.ndarray:
        """Physical coordinates, stack (3, n, n, n)"""
        x = np.arange(self.n) * self.spacing
        return np.stack(np.meshgrid(x, x, x, indexing="ij"))

    def symmetrize(self, symbol: np.ndarray) -> np.ndarray:
        """
        Make a sampled symbol respect the grid's conjugate pairing

        Away from the Nyquist planes a symbol with m(-xi) = conj(m(xi)) is
        left untouched. On Nyquist planes the stored frequency -n/2 has no
        negated partner on the grid, so the value is averaged with the
        conjugate of its partner entry; odd symbols vanish there.
        """
        paired = 0.5 * (symbol + np.conj(conjugate_partner(symbol)))
        out = np.array(symbol, dtype=np.result_type(symbol, np.complex128), copy=True)
        out[..., self.nyquist_mask] = paired[..., self.nyquist_mask]
        if np.isrealobj(symbol):
            return out.real
        return out

    def __repr__(self) -> str:
        return f"Grid(n={self.n}, box_size={self.box_size:.6g})"
