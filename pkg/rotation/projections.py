"""
Projections
Leray projection, helical projections P+/- and the Coriolis rotation term
"""

from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np
from loguru import logger

from spectral.errors import ValidationFailure
from spectral.fields import SpectralVectorField
from spectral.grid import Grid

DIVERGENCE_TOL = 1e-10


def _prepared(v: SpectralVectorField) -> np.ndarray:
    """Coefficients with Nyquist planes and the mean removed"""
    coeffs = np.array(v.coeffs)
    coeffs[:, v.grid.nyquist_mask] = 0.0
    if np.any(coeffs[:, 0, 0, 0]):
        logger.debug("Mean mode removed before projection")
        coeffs[:, 0, 0, 0] = 0.0
    return coeffs


def leray_project(v: SpectralVectorField) -> SpectralVectorField:
    """
    P v: v_hat -> v_hat - xi_hat (xi_hat . v_hat)

    The mean mode and the Nyquist planes are zeroed, so the result is
    divergence-free, mean-zero and Hermitian whenever v is.
    """
    coeffs = _prepared(v)
    unit = v.grid.xi_unit
    along = np.sum(unit * coeffs, axis=0)
    return v.with_coeffs(coeffs - unit * along)


def unit_cross(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """xi_hat x v_hat, the symbol of (D/|D|) x"""
    u1, u2, u3 = grid.xi_unit
    a1, a2, a3 = coeffs
    return np.stack([u2 * a3 - u3 * a2, u3 * a1 - u1 * a3, u1 * a2 - u2 * a1])


def helicity_operator(v: SpectralVectorField) -> SpectralVectorField:
    """
    i xi_hat x v_hat, i.e. curl |D|^-1; an involution on divergence-free fields
    """
    return v.with_coeffs(1j * unit_cross(v.grid, _prepared(v)))


@dataclass(frozen=True, eq=False)
class WaveSplit:
    """Helical components P+ v and P- v of a field"""
    plus: SpectralVectorField
    minus: SpectralVectorField

    @property
    def total(self) -> SpectralVectorField:
        return self.plus + self.minus

    @property
    def difference(self) -> SpectralVectorField:
        return self.plus - self.minus


def wave_split(v: SpectralVectorField) -> WaveSplit:
    """
    P+/- v = (P v +/- i xi_hat x P v) / 2

    P+ modes are curl eigenfields with eigenvalue +|xi|, P- with -|xi|.
    """
    pv = leray_project(v)
    rot = 1j * unit_cross(v.grid, pv.coeffs)
    return WaveSplit(
        plus=pv.with_coeffs(0.5 * (pv.coeffs + rot)),
        minus=pv.with_coeffs(0.5 * (pv.coeffs - rot)),
    )


def check_divergence_free(v: SpectralVectorField, tol: float = DIVERGENCE_TOL) -> None:
    residual = v.divergence_residual()
    if residual > tol:
        raise ValidationFailure(f"field is not divergence-free: residual {residual:.3e} > {tol:.1e}")


def vertical_cross(v: SpectralVectorField) -> SpectralVectorField:
    """e3 x v, exact since e3 is constant"""
    c = v.coeffs
    return v.with_coeffs(np.stack([-c[1], c[0], np.zeros_like(c[2])]))


def coriolis_rotation_term(v: SpectralVectorField, tol: float = DIVERGENCE_TOL) -> SpectralVectorField:
    """
    P(e3 x v), computed directly as a cross product followed by Leray

    Raises:
        ValidationFailure: v is not divergence-free within tol
    """
    check_divergence_free(v, tol)
    return leray_project(vertical_cross(v))


def coriolis_rotation_term_helical(v: SpectralVectorField) -> SpectralVectorField:
    """-i (D3/|D|) (P+ v - P- v)"""
    split = wave_split(v)
    return split.plus.with_coeffs(-1j * v.grid.vertical_ratio * split.difference.coeffs)


def _rel(a: SpectralVectorField, scale: float) -> float:
    return a.energy() / scale if scale > 0 else a.energy()


def rotation_identity_residual(v: SpectralVectorField) -> float:
    """||P(e3 x v) + i (D3/|D|)(P+ v - P- v)|| / ||v||"""
    return _rel(coriolis_rotation_term(v) - coriolis_rotation_term_helical(v), v.energy())


def wave_split_residuals(v: SpectralVectorField) -> Dict[str, float]:
    """
    Residuals of the helical-projection identities, relative to ||v||

    Keys: reconstruction, idempotence_plus, idempotence_minus,
    orthogonality_plus_minus, orthogonality_minus_plus, rotation_identity.
    """
    scale = v.energy()
    split = wave_split(v)
    of_plus = wave_split(split.plus)
    of_minus = wave_split(split.minus)
    return {
        "reconstruction": _rel(split.total - leray_project(v), scale),
        "idempotence_plus": _rel(of_plus.plus - split.plus, scale),
        "idempotence_minus": _rel(of_minus.minus - split.minus, scale),
        "orthogonality_plus_minus": _rel(of_minus.plus, scale),
        "orthogonality_minus_plus": _rel(of_plus.minus, scale),
        "rotation_identity": rotation_identity_residual(v),
    }


# ==================== Helical modes ====================

def helical_mode(grid: Grid, wavevector: Sequence[int], sign: int = 1, amplitude: float = 1.0) -> SpectralVectorField:
    """
    Single helical (Beltrami) mode at integer wavevector k

    u(x) = amplitude * (e cos(xi.x) - sign (xi_hat x e) sin(xi.x)) with e a
    unit vector orthogonal to xi; curl u = sign |xi| u and |u| = amplitude
    everywhere.

    Args:
        grid: target grid
        wavevector: integer k (nonzero, inside the dealiased range)
        sign: +1 or -1, the helicity
        amplitude: pointwise speed of the mode
    """
    k = np.asarray(wavevector, dtype=np.int64)
    if k.shape != (3,) or not np.any(k):
        raise ValidationFailure(f"wavevector must be a nonzero integer triple, got {wavevector}")
    if np.abs(k).max() > grid.dealias_cutoff:
        raise ValidationFailure(f"wavevector {tuple(k)} lies outside the dealiased range |k| <= {grid.dealias_cutoff}")
    if sign not in (1, -1):
        raise ValidationFailure(f"helicity sign must be +1 or -1, got {sign}")

    xi = 2.0 * np.pi * k / grid.box_size
    xi_hat = xi / np.linalg.norm(xi)
    axis = np.array([0.0, 0.0, 1.0])
    if abs(xi_hat @ axis) > 0.9:
        axis = np.array([1.0, 0.0, 0.0])
    e = axis - (axis @ xi_hat) * xi_hat
    e /= np.linalg.norm(e)
    h = e + 1j * sign * np.cross(xi_hat, e)

    coeffs = np.zeros((3,) + grid.shape, dtype=np.complex128)
    n = grid.n
    pos = tuple(int(c) % n for c in k)
    neg = tuple(int(-c) % n for c in k)
    coeffs[(slice(None),) + pos] = 0.5 * amplitude * h
    coeffs[(slice(None),) + neg] = 0.5 * amplitude * np.conj(h)
    return SpectralVectorField(grid, coeffs)
