"""
Spectral Fields
Immutable scalar and vector fields stored as Fourier-series coefficients
"""

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple, Union

import numpy as np
import scipy.fft as sfft

from spectral.errors import ValidationFailure
from spectral.grid import Grid, conjugate_partner

Number = Union[int, float, complex]


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def forward_transform(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Physical samples -> Fourier-series coefficients (divides by n^3)"""
    return sfft.fftn(values, axes=(-3, -2, -1)) / grid.n ** 3


def inverse_transform(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Fourier-series coefficients -> real physical samples"""
    return np.real(sfft.ifftn(coeffs, axes=(-3, -2, -1))) * grid.n ** 3


def hermitian_residual(coeffs: np.ndarray) -> float:
    """max |c(k) - conj(c(-k))| relative to max |c|"""
    scale = float(np.abs(coeffs).max()) if coeffs.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.abs(coeffs - np.conj(conjugate_partner(coeffs))).max()) / scale


@dataclass(frozen=True, eq=False)
class SpectralScalarField:
    """
    Scalar field on the periodic box represented by its coefficients

    f(x) = sum_k coeffs[k] exp(i xi_k . x), so a single cosine mode has
    coefficients 1/2 at +/-k.
    """
    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ValidationFailure(
                f"coefficient shape {self.coeffs.shape} does not match grid {self.grid.shape}"
            )
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))

    # ==================== Construction ====================

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralScalarField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @classmethod
    def from_physical(cls, values: np.ndarray, grid: Grid) -> "SpectralScalarField":
        values = np.asarray(values)
        if values.shape != grid.shape:
            raise ValidationFailure(f"sample shape {values.shape} does not match grid {grid.shape}")
        if np.iscomplexobj(values):
            raise ValidationFailure("physical samples must be real")
        return cls(grid, forward_transform(values.astype(np.float64), grid))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralScalarField":
        return SpectralScalarField(self.grid, coeffs)

    # ==================== Views ====================

    def to_physical(self) -> np.ndarray:
        return inverse_transform(self.coeffs, self.grid)

    def hermitian_residual(self) -> float:
        return hermitian_residual(self.coeffs)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermitian_residual() <= tol

    def strip_nyquist(self) -> "SpectralScalarField":
        out = np.array(self.coeffs)
        out[self.grid.nyquist_mask] = 0.0
        return self.with_coeffs(out)

    def mean_free(self) -> "SpectralScalarField":
        out = np.array(self.coeffs)
        out[0, 0, 0] = 0.0
        return self.with_coeffs(out)

    @property
    def mean(self) -> complex:
        return complex(self.coeffs[0, 0, 0])

    def inner(self, other: "SpectralScalarField") -> float:
        """Real L^2 inner product, computed by Parseval"""
        self._check_grid(other)
        return float(np.real(np.vdot(other.coeffs, self.coeffs))) * self.grid.volume

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * self.grid.volume))

    # ==================== Arithmetic ====================

    def _check_grid(self, other: "SpectralScalarField"):
        if other.grid != self.grid:
            raise ValidationFailure(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: "SpectralScalarField") -> "SpectralScalarField":
        self._check_grid(other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralScalarField") -> "SpectralScalarField":
        self._check_grid(other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __mul__(self, scalar: Number) -> "SpectralScalarField":
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralScalarField":
        return self.with_coeffs(-self.coeffs)

    def __repr__(self) -> str:
        return f"SpectralScalarField({self.grid!r}, l2={self.l2_norm():.6g})"


@dataclass(frozen=True, eq=False)
class SpectralVectorField:
    """
    Three-component field sharing one grid, coefficients stacked (3, n, n, n)
    """
    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (3,) + self.grid.shape:
            raise ValidationFailure(
                f"vector coefficient shape {self.coeffs.shape} does not match (3,) + {self.grid.shape}"
            )
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))

    # ==================== Construction ====================

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralVectorField":
        return cls(grid, np.zeros((3,) + grid.shape, dtype=np.complex128))

    @classmethod
    def from_components(cls, components: Sequence[SpectralScalarField]) -> "SpectralVectorField":
        if len(components) != 3:
            raise ValidationFailure(f"vector field needs 3 components, got {len(components)}")
        grid = components[0].grid
        for comp in components[1:]:
            if comp.grid != grid:
                raise ValidationFailure("vector components must share one grid")
        return cls(grid, np.stack([c.coeffs for c in components]))

    @classmethod
    def from_physical(cls, values: np.ndarray, grid: Grid) -> "SpectralVectorField":
        values = np.asarray(values)
        if values.shape != (3,) + grid.shape:
            raise ValidationFailure(f"sample shape {values.shape} does not match (3,) + {grid.shape}")
        if np.iscomplexobj(values):
            raise ValidationFailure("physical samples must be real")
        return cls(grid, forward_transform(values.astype(np.float64), grid))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, coeffs)

    # ==================== Views ====================

    @property
    def components(self) -> Tuple[SpectralScalarField, SpectralScalarField, SpectralScalarField]:
        return tuple(SpectralScalarField(self.grid, self.coeffs[i]) for i in range(3))

    def __iter__(self) -> Iterator[SpectralScalarField]:
        return iter(self.components)

    def to_physical(self) -> np.ndarray:
        return inverse_transform(self.coeffs, self.grid)

    def hermitian_residual(self) -> float:
        return hermitian_residual(self.coeffs)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermitian_residual() <= tol

    def divergence_residual(self) -> float:
        """max |xi . u_hat| over the grid, relative to max |u_hat|"""
        scale = float(np.abs(self.coeffs).max())
        if scale == 0.0:
            return 0.0
        xi = self.grid.xi
        div = xi[0] * self.coeffs[0] + xi[1] * self.coeffs[1] + xi[2] * self.coeffs[2]
        return float(np.abs(div).max()) / scale

    def is_divergence_free(self, tol: float = 1e-10) -> bool:
        return self.divergence_residual() <= tol

    def strip_nyquist(self) -> "SpectralVectorField":
        out = np.array(self.coeffs)
        out[:, self.grid.nyquist_mask] = 0.0
        return self.with_coeffs(out)

    def mean_free(self) -> "SpectralVectorField":
        out = np.array(self.coeffs)
        out[:, 0, 0, 0] = 0.0
        return self.with_coeffs(out)

    @property
    def mean(self) -> np.ndarray:
        return np.array(self.coeffs[:, 0, 0, 0])

    def reflect(self) -> "SpectralVectorField":
        """Point reflection u(x) -> u(-x) (coefficients c(k) -> c(-k))"""
        return self.with_coeffs(conjugate_partner(self.coeffs))

    def inner(self, other: "SpectralVectorField") -> float:
        """Real L^2 inner product summed over components"""
        self._check_grid(other)
        return float(np.real(np.vdot(other.coeffs, self.coeffs))) * self.grid.volume

    def energy(self) -> float:
        """L^2 norm ||u||, the conserved quantity of the inviscid flow"""
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * self.grid.volume))

    l2_norm = energy

    # ==================== Arithmetic ====================

    def _check_grid(self, other: "SpectralVectorField"):
        if other.grid != self.grid:
            raise ValidationFailure(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        self._check_grid(other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        self._check_grid(other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __mul__(self, scalar: Number) -> "SpectralVectorField":
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralVectorField":
        return self.with_coeffs(-self.coeffs)

    def __repr__(self) -> str:
        return f"SpectralVectorField({self.grid!r}, energy={self.energy():.6g})"
