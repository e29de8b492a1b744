"""
Besov Inequality Verifiers
Empirical constants for Bernstein, embedding, lifting, norm equivalence and interpolation
"""

from typing import List, Sequence

import numpy as np
from loguru import logger

from spectral.errors import ValidationFailure
from spectral.fields import SpectralScalarField
from spectral.operators import fractional_derivative, gradient, lp_norm
from besov.ensembles import shell_ensemble
from besov.norms import BesovIndex, besov_norm
from besov.partition import DyadicPartition
from besov.reports import EmpiricalConstantReport


def _require(ensemble: Sequence) -> None:
    if len(ensemble) == 0:
        raise ValidationFailure("empty ensemble")


def bernstein_ratio(f: SpectralScalarField, j: int, k_order: float, p: float = 2.0) -> float:
    """||D^k f||_p / (2^(jk) ||f||_p) for f supported in shell j"""
    return lp_norm(fractional_derivative(f, k_order), p) / (2.0 ** (j * k_order) * lp_norm(f, p))


def verify_bernstein(partition: DyadicPartition, ensemble_size: int, k_order: float,
                     p: float = 2.0, seed: int = 0) -> EmpiricalConstantReport:
    """
    Observed ratio ||D^k f||_p / (2^(jk) ||f||_p) over random shell-supported fields

    Args:
        partition: dyadic partition of the working grid
        ensemble_size: number of random fields (cycled over interior shells)
        k_order: derivative order k of the symbol |xi|^k
        p: integrability exponent
        seed: ensemble seed

    Returns:
        EmpiricalConstantReport with min/median/max ratio
    """
    if ensemble_size <= 0:
        raise ValidationFailure("empty ensemble")
    samples = shell_ensemble(partition, ensemble_size, seed)
    ratios = [bernstein_ratio(f, j, k_order, p) for j, f in samples]
    report = EmpiricalConstantReport.from_ratios(
        f"bernstein-k{k_order:g}-p{p:g}", ratios, seed,
        description="||D^k f||_p / (2^{jk} ||f||_p), f in shell j",
    )
    logger.debug(f"Bernstein k={k_order} p={p}: ratios in [{report.min_ratio:.4g}, {report.max_ratio:.4g}]")
    return report


def verify_embedding(partition: DyadicPartition, ensemble: Sequence[SpectralScalarField], seed: int = 0) -> List[EmpiricalConstantReport]:
    """
    L^inf control by critical Besov norms

    ||f||_inf / ||f||_{B^{3/2}_{2,1}} and ||grad f||_inf / ||f||_{B^{5/2}_{2,1}}
    """
    _require(ensemble)
    b32 = BesovIndex(1.5, 2, 1)
    b52 = BesovIndex(2.5, 2, 1)
    sup_ratios = [lp_norm(f, np.inf) / besov_norm(f, partition, b32) for f in ensemble]
    grad_ratios = [lp_norm(gradient(f), np.inf) / besov_norm(f, partition, b52) for f in ensemble]
    return [
        EmpiricalConstantReport.from_ratios("embedding-linf", sup_ratios, seed,
                                            description="||f||_inf / ||f||_{B^{3/2}_{2,1}}"),
        EmpiricalConstantReport.from_ratios("embedding-grad", grad_ratios, seed,
                                            description="||grad f||_inf / ||f||_{B^{5/2}_{2,1}}"),
    ]


def verify_lifting(partition: DyadicPartition, ensemble: Sequence[SpectralScalarField], k: float, s: float,
                   p: float = 2.0, q: float = 1.0, seed: int = 0) -> EmpiricalConstantReport:
    """||D^k f||_{hB^s_{p,q}} / ||f||_{hB^{s+k}_{p,q}}"""
    _require(ensemble)
    lhs = BesovIndex(s, p, q, homogeneous=True)
    rhs = BesovIndex(s + k, p, q, homogeneous=True)
    ratios = [besov_norm(fractional_derivative(f, k), partition, lhs) / besov_norm(f, partition, rhs) for f in ensemble]
    return EmpiricalConstantReport.from_ratios("lifting", ratios, seed,
                                               description=f"||D^{k:g} f||_{lhs} / ||f||_{rhs}")


def verify_norm_equivalence(partition: DyadicPartition, ensemble: Sequence[SpectralScalarField], s: float,
                            p: float = 2.0, q: float = 1.0, seed: int = 0) -> EmpiricalConstantReport:
    """||f||_{B^s} / (||f||_{hB^s} + ||f||_p) for s > 0"""
    _require(ensemble)
    if s <= 0:
        raise ValidationFailure(f"norm equivalence needs s > 0, got {s}")
    inhom = BesovIndex(s, p, q)
    hom = BesovIndex(s, p, q, homogeneous=True)
    ratios = [besov_norm(f, partition, inhom) / (besov_norm(f, partition, hom) + lp_norm(f, p)) for f in ensemble]
    return EmpiricalConstantReport.from_ratios("norm-equivalence", ratios, seed,
                                               description=f"||f||_{inhom} / (||f||_{hom} + ||f||_p)")


def verify_interpolation(partition: DyadicPartition, ensemble: Sequence[SpectralScalarField], s1: float, s2: float,
                         theta: float, seed: int = 0) -> EmpiricalConstantReport:
    """
    Interpolation between Sobolev-type and critical Besov norms

    ||f||_{B^{s3}_{2,1}} / (||f||_{B^{s1}_{2,2}}^(1-theta) ||f||_{B^{s2}_{2,1}}^theta)
    with s3 = (1 - theta) s1 + theta s2.
    """
    _require(ensemble)
    if not 0.0 < theta < 1.0:
        raise ValidationFailure(f"interpolation weight must lie in (0, 1), got {theta}")
    s3 = (1.0 - theta) * s1 + theta * s2
    mid = BesovIndex(s3, 2, 1)
    low = BesovIndex(s1, 2, 2)
    high = BesovIndex(s2, 2, 1)
    ratios = []
    for f in ensemble:
        denom = besov_norm(f, partition, low) ** (1.0 - theta) * besov_norm(f, partition, high) ** theta
        ratios.append(besov_norm(f, partition, mid) / denom)
    return EmpiricalConstantReport.from_ratios("interpolation", ratios, seed,
                                               description=f"s1={s1:g}, s2={s2:g}, theta={theta:g}")
