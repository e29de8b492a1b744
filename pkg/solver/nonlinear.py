"""
Nonlinear Term
-P[(u . grad) u] evaluated pseudo-spectrally
"""

from spectral.fields import SpectralVectorField
from spectral.operators import advect
from rotation.projections import DIVERGENCE_TOL, check_divergence_free, leray_project


def nonlinear_term(u: SpectralVectorField, dealiased: bool = True, tol: float = DIVERGENCE_TOL) -> SpectralVectorField:
    """
    N(u) = -P[(u . grad) u]

    The convective product is formed on the physical grid from the nine
    derivatives d_k u_j, transformed back, truncated by the 2/3 rule and
    Leray-projected. For divergence-free u the result is orthogonal to u
    in L^2.

    Raises:
        ValidationFailure: u is not divergence-free within tol
    """
    check_divergence_free(u, tol)
    return -leray_project(advect(u, u, dealiased=dealiased))
