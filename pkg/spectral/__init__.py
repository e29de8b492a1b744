"""
Spectral Core

Periodic-box spectral substrate shared by every other package:
- Grid: collocation grid and Fourier lattice on [0, L)^3
- Scalar and vector fields stored as Fourier-series coefficients
- Multipliers, derivatives, dealiasing, L^p norms
- Snapshot files and the error hierarchy
"""

from .errors import (
    LabError,
    ValidationFailure,
    NonFiniteMultiplier,
    ConfigError,
    SolverAbort,
    PicardDivergence,
    ArtifactError,
)
from .grid import Grid, conjugate_partner
from .fields import SpectralScalarField, SpectralVectorField
from .operators import (
    to_spectral,
    to_physical,
    evaluate_symbol,
    apply_multiplier,
    gradient,
    divergence,
    curl,
    laplacian,
    fractional_derivative,
    velocity_gradient,
    gradient_sup,
    dealias,
    advect,
    cross,
    multiply,
    pointwise_magnitude,
    lp_norm,
)
from .snapshot import write_snapshot, read_snapshot

__all__ = [
    'LabError',
    'ValidationFailure',
    'NonFiniteMultiplier',
    'ConfigError',
    'SolverAbort',
    'PicardDivergence',
    'ArtifactError',
    'Grid',
    'conjugate_partner',
    'SpectralScalarField',
    'SpectralVectorField',
    'to_spectral',
    'to_physical',
    'evaluate_symbol',
    'apply_multiplier',
    'gradient',
    'divergence',
    'curl',
    'laplacian',
    'fractional_derivative',
    'velocity_gradient',
    'gradient_sup',
    'dealias',
    'advect',
    'cross',
    'multiply',
    'pointwise_magnitude',
    'lp_norm',
    'write_snapshot',
    'read_snapshot',
]
