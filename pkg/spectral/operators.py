"""
Spectral Operators
Transforms, Fourier multipliers, derivatives, dealiasing and L^p norms

Every differential operator here is a pointwise multiplier in xi, so they
all commute with each other and with the projections built on top of them.
Transforms are exact, so to_spectral keeps whatever the samples carry on the
Nyquist planes. The -n/2 row has no conjugate partner on the grid: the
differential operators zero it on input, and apply_multiplier symmetrizes the
symbol there, so a general multiplier keeps the planes paired but nonzero.
Call strip_nyquist() to drop them explicitly.
"""

from typing import Callable, Optional, Union

import numpy as np

from spectral.errors import NonFiniteMultiplier, ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField, inverse_transform
from spectral.grid import Grid

Field = Union[SpectralScalarField, SpectralVectorField]
Symbol = Union[Callable[..., np.ndarray], np.ndarray, complex, float]

SUPPORTED_P = (1.0, 2.0, np.inf)


# ==================== Transforms ====================

def to_spectral(values: np.ndarray, grid: Grid) -> Field:
    """
    Transform real physical samples into spectral coefficients

    Args:
        values: real array of shape (n, n, n) or (3, n, n, n)
        grid: grid the samples live on

    Returns:
        SpectralScalarField or SpectralVectorField, depending on the shape
    """
    values = np.asarray(values)
    if values.shape == grid.shape:
        return SpectralScalarField.from_physical(values, grid)
    if values.shape == (3,) + grid.shape:
        return SpectralVectorField.from_physical(values, grid)
    raise ValidationFailure(f"sample shape {values.shape} does not match grid {grid.shape}")


def to_physical(f: Field) -> np.ndarray:
    return f.to_physical()


# ==================== Multipliers ====================

def evaluate_symbol(grid: Grid, symbol: Symbol, at_zero: Optional[complex] = None) -> np.ndarray:
    """
    Sample a Fourier symbol on every grid frequency

    Args:
        grid: target grid
        symbol: callable m(xi1, xi2, xi3) on broadcast arrays, a precomputed
            (n, n, n) array, or a constant
        at_zero: value used at xi = 0; None keeps the symbol's own value there
            when it is finite and uses 0 otherwise (degree-0 symbols such as
            xi_i/|xi| are undefined at the origin)

    Returns:
        (n, n, n) array, Hermitian-paired on the Nyquist planes

    Raises:
        NonFiniteMultiplier: the symbol is NaN/Inf at some nonzero frequency
    """
    with np.errstate(all="ignore"):
        raw = symbol(*grid.xi) if callable(symbol) else symbol
    values = np.array(np.broadcast_to(np.asarray(raw), grid.shape))
    if at_zero is None:
        own = values[grid.zero_mode]
        at_zero = own if np.isfinite(own) else 0.0
    if np.iscomplexobj(at_zero) and not np.iscomplexobj(values):
        values = values.astype(np.complex128)
    values[grid.zero_mode] = at_zero

    bad = ~np.isfinite(values)
    if bad.any():
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        xi = tuple(float(component[idx]) for component in grid.xi)
        raise NonFiniteMultiplier(xi, complex(values[idx]))

    return grid.symmetrize(values)


def apply_multiplier(f: Field, symbol: Symbol, *, at_zero: Optional[complex] = None) -> Field:
    """
    coeffs(k) -> m(xi_k) * coeffs(k), componentwise for vector fields

    Hermitian symmetry of f is preserved whenever m(-xi) = conj(m(xi)).
    A constant symbol m = c scales every mode, the mean included.
    """
    m = evaluate_symbol(f.grid, symbol, at_zero)
    return f.with_coeffs(f.coeffs * m)


def _clean(f: Field) -> Field:
    if not np.any(f.coeffs[..., f.grid.nyquist_mask]):
        return f
    return f.strip_nyquist()


# ==================== Derivatives ====================

def gradient(f: SpectralScalarField) -> SpectralVectorField:
    f = _clean(f)
    xi = f.grid.xi
    return SpectralVectorField(f.grid, np.stack([1j * xi[i] * f.coeffs for i in range(3)]))


def divergence(v: SpectralVectorField) -> SpectralScalarField:
    v = _clean(v)
    xi = v.grid.xi
    return SpectralScalarField(v.grid, 1j * (xi[0] * v.coeffs[0] + xi[1] * v.coeffs[1] + xi[2] * v.coeffs[2]))


def curl(v: SpectralVectorField) -> SpectralVectorField:
    v = _clean(v)
    x1, x2, x3 = v.grid.xi
    a1, a2, a3 = v.coeffs
    return v.with_coeffs(1j * np.stack([x2 * a3 - x3 * a2, x3 * a1 - x1 * a3, x1 * a2 - x2 * a1]))


def laplacian(f: Field) -> Field:
    f = _clean(f)
    return f.with_coeffs(-f.grid.xi_squared * f.coeffs)


def fractional_derivative(f: Field, k: float) -> Field:
    """
    D^k with symbol |xi|^k (k may be negative; the mean is mapped to 0)
    """
    f = _clean(f)
    grid = f.grid
    with np.errstate(divide="ignore"):
        symbol = np.where(grid.xi_norm > 0, np.power(np.where(grid.xi_norm > 0, grid.xi_norm, 1.0), k), 0.0)
    return f.with_coeffs(f.coeffs * symbol)


def velocity_gradient(u: SpectralVectorField) -> np.ndarray:
    """
    Physical-space tensor G[j, k] = d_k u_j, shape (3, 3, n, n, n)
    """
    u = _clean(u)
    xi = u.grid.xi
    grads = np.stack([np.stack([1j * xi[k] * u.coeffs[j] for k in range(3)]) for j in range(3)])
    return inverse_transform(grads, u.grid)


def gradient_sup(u: SpectralVectorField) -> float:
    """max over the grid and over all nine entries of |d_k u_j|"""
    return float(np.abs(velocity_gradient(u)).max())


# ==================== Dealiasing and products ====================

def dealias(f: Field) -> Field:
    """2/3 rule: zero every mode with some |k_axis| > n/3 (idempotent)"""
    return f.with_coeffs(f.coeffs * f.grid.dealias_mask)


def advect(v: SpectralVectorField, w: Field, dealiased: bool = True) -> Field:
    """
    (v . grad) w, computed pseudo-spectrally

    With dealiased=True both inputs are truncated to the 2/3 range before
    the product and the result after it, so the quadratic term is free of
    aliasing on the retained modes. Otherwise only Nyquist planes are cut.
    """
    if v.grid != w.grid:
        raise ValidationFailure(f"grid mismatch: {v.grid} vs {w.grid}")
    grid = v.grid
    cut = dealias if dealiased else _clean
    v_phys = cut(v).to_physical()
    w_hat = cut(w).coeffs
    xi = grid.xi

    if isinstance(w, SpectralScalarField):
        dw = inverse_transform(np.stack([1j * xi[k] * w_hat for k in range(3)]), grid)
        product = np.einsum("k...,k...->...", v_phys, dw)
    else:
        dw = inverse_transform(np.stack([np.stack([1j * xi[k] * w_hat[j] for k in range(3)]) for j in range(3)]), grid)
        product = np.einsum("k...,jk...->j...", v_phys, dw)

    return cut(to_spectral(product, grid))


def cross(a: SpectralVectorField, b: SpectralVectorField) -> SpectralVectorField:
    """Pointwise a x b, computed pseudo-spectrally and dealiased"""
    if a.grid != b.grid:
        raise ValidationFailure(f"grid mismatch: {a.grid} vs {b.grid}")
    pa = dealias(a).to_physical()
    pb = dealias(b).to_physical()
    return dealias(to_spectral(np.cross(pa, pb, axis=0), a.grid))


def multiply(f: SpectralScalarField, g: SpectralScalarField) -> SpectralScalarField:
    """Pointwise product f g, computed pseudo-spectrally and dealiased"""
    if f.grid != g.grid:
        raise ValidationFailure(f"grid mismatch: {f.grid} vs {g.grid}")
    return dealias(to_spectral(dealias(f).to_physical() * dealias(g).to_physical(), f.grid))


# ==================== Norms ====================

def _check_p(p: float) -> float:
    p = float(p)
    if p not in SUPPORTED_P:
        raise ValidationFailure(f"unsupported integrability exponent p={p}; choose 1, 2 or inf")
    return p


def pointwise_magnitude(f: Field) -> np.ndarray:
    """|f(x)| on the grid; the Euclidean length for vector fields"""
    values = f.to_physical()
    if isinstance(f, SpectralVectorField):
        return np.sqrt(np.sum(values ** 2, axis=0))
    return np.abs(values)


def lp_norm(f: Field, p: float) -> float:
    """
    ||f||_{L^p} on the box

    p = 2 uses Parseval on the coefficients; p = 1 is the midpoint rule
    with cell volume (L/n)^3; p = inf is the grid maximum, which can miss
    the true peak by O(n^-2).
    """
    p = _check_p(p)
    grid = f.grid
    if p == 2.0:
        return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2) * grid.volume))
    magnitude = pointwise_magnitude(f)
    if p == 1.0:
        return float(magnitude.sum() * grid.cell_volume)
    return float(magnitude.max())
