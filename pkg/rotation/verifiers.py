"""
Operator Inequality Verifiers
Empirical constants for heat smoothing, commutator and product estimates,
and the assembled lemma suite
"""

from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from spectral.errors import ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.grid import Grid
from spectral.operators import advect, gradient_sup, lp_norm, multiply
from besov.ensembles import scalar_ensemble, vector_ensemble
from besov.norms import BesovIndex, besov_norm, sequence_norm
from besov.partition import DyadicPartition, build_partition, low_pass, lp_block
from besov.reports import EmpiricalConstantReport
from besov.verifiers import (
    verify_bernstein,
    verify_embedding,
    verify_interpolation,
    verify_lifting,
    verify_norm_equivalence,
)
from rotation.projections import leray_project, wave_split_residuals
from rotation.propagators import heat_propagator


def _inv(p: float) -> float:
    return 0.0 if np.isinf(p) else 1.0 / p


# ==================== Heat smoothing ====================

def heat_smoothing_ratio(f, partition: DyadicPartition, nu: float, t: float, s0: float, s1: float,
                         p: float = 2.0, q: float = 1.0) -> float:
    """||e^{nu t Lap} f||_{B^s1} / ((1 + t^{-(s1-s0)/2}) ||f||_{B^s0})"""
    smoothed = heat_propagator(f, nu, t)
    lhs = besov_norm(smoothed, partition, BesovIndex(s1, p, q))
    rhs = (1.0 + t ** (-(s1 - s0) / 2.0)) * besov_norm(f, partition, BesovIndex(s0, p, q))
    return lhs / rhs


def verify_heat_smoothing(partition: DyadicPartition, nu: float, ensemble: Sequence, s0: float, s1: float,
                          t_list: Sequence[float], p: float = 2.0, q: float = 1.0,
                          seed: int = 0) -> EmpiricalConstantReport:
    """
    Besov smoothing of the heat semigroup over an ensemble and a list of times

    Raises:
        ValidationFailure: s1 < s0, nonpositive times or an empty ensemble
    """
    if s1 < s0:
        raise ValidationFailure(f"smoothing needs s1 >= s0, got s0={s0}, s1={s1}")
    if not t_list or min(t_list) <= 0:
        raise ValidationFailure("heat smoothing times must be positive")
    if len(ensemble) == 0:
        raise ValidationFailure("empty ensemble")
    ratios = [heat_smoothing_ratio(f, partition, nu, t, s0, s1, p, q) for f in ensemble for t in t_list]
    return EmpiricalConstantReport.from_ratios(
        "heat-smoothing", ratios, seed,
        description=f"||e^(nu t Lap) f||_B^{s1:g} / ((1 + t^-{(s1 - s0) / 2:g}) ||f||_B^{s0:g})",
    )


# ==================== Commutators ====================

def commutator_sequence(v: SpectralVectorField, theta: SpectralVectorField, partition: DyadicPartition,
                        s: float, p: float = 2.0, q: float = 1.0) -> float:
    """(sum_j 2^{sjq} ||v.grad(Delta_j theta) - Delta_j(v.grad theta)||_p^q)^(1/q)"""
    full = advect(v, theta)
    terms = []
    for j in partition.shells:
        comm = advect(v, lp_block(theta, partition, j)) - lp_block(full, partition, j)
        terms.append(2.0 ** (s * j) * lp_norm(comm, p))
    return sequence_norm(terms, q)


def low_high_commutator_sequence(u: SpectralVectorField, partition: DyadicPartition,
                                 s: float, p: float = 2.0, q: float = 1.0) -> float:
    """(sum_j 2^{sjq} ||(S_{j-2}u.grad) Delta_j u - Delta_j (u.grad) u||_p^q)^(1/q)"""
    full = advect(u, u)
    terms = []
    for j in partition.shells:
        comm = advect(low_pass(u, partition, j - 2), lp_block(u, partition, j)) - lp_block(full, partition, j)
        terms.append(2.0 ** (s * j) * lp_norm(comm, p))
    return sequence_norm(terms, q)


def verify_commutator(partition: DyadicPartition, ensemble: Sequence[Tuple[SpectralVectorField, SpectralVectorField]],
                      s: float, p: float = 2.0, q: float = 1.0, seed: int = 0,
                      include_variant_ii: bool = False) -> List[EmpiricalConstantReport]:
    """
    Commutator estimates over pairs (v, theta) of divergence-free fields

    Reports, in order:
    - commutator: lhs / (||grad v||_inf ||theta||_hB^s + ||grad theta||_inf ||v||_hB^s)
    - commutator-low-high: lhs / (||grad u||_inf ||u||_B^s) with u = v
    - commutator-negative-s (only with include_variant_ii):
      lhs / (||grad v||_inf ||theta||_hB^s + ||theta||_inf ||v||_hB^{s+1})
    """
    if len(ensemble) == 0:
        raise ValidationFailure("empty ensemble")
    hom = BesovIndex(s, p, q, homogeneous=True)
    inhom = BesovIndex(s, p, q)
    hom_up = BesovIndex(s + 1.0, p, q, homogeneous=True)

    main, low_high, variant = [], [], []
    for v, theta in ensemble:
        lhs = commutator_sequence(v, theta, partition, s, p, q)
        grad_v = gradient_sup(v)
        theta_hom = besov_norm(theta, partition, hom)
        main.append(lhs / (grad_v * theta_hom + gradient_sup(theta) * besov_norm(v, partition, hom)))

        lhs_lh = low_high_commutator_sequence(v, partition, s, p, q)
        low_high.append(lhs_lh / (grad_v * besov_norm(v, partition, inhom)))

        if include_variant_ii:
            rhs = grad_v * theta_hom + lp_norm(theta, np.inf) * besov_norm(v, partition, hom_up)
            variant.append(lhs / rhs)

    reports = [
        EmpiricalConstantReport.from_ratios("commutator", main, seed, description=f"s={s:g}, p={p:g}, q={q:g}"),
        EmpiricalConstantReport.from_ratios("commutator-low-high", low_high, seed,
                                            description=f"s={s:g}, p={p:g}, q={q:g}"),
    ]
    if include_variant_ii:
        if s <= -1:
            raise ValidationFailure(f"negative-regularity commutator needs s > -1, got {s}")
        reports.append(EmpiricalConstantReport.from_ratios("commutator-negative-s", variant, seed,
                                                           description=f"s={s:g}, p={p:g}, q={q:g}"))
    return reports


# ==================== Products ====================

def check_holder_split(p_splits: Sequence[float]) -> Tuple[float, float, float, float, float]:
    """
    Validate (p, p1, p2, r1, r2) with 1/p = 1/p1 + 1/p2 = 1/r1 + 1/r2, all in {1, 2, inf}
    """
    if len(p_splits) != 5:
        raise ValidationFailure(f"Hoelder split needs five exponents (p, p1, p2, r1, r2), got {len(p_splits)}")
    values = tuple(float(x) for x in p_splits)
    for x in values:
        if x not in (1.0, 2.0, np.inf):
            raise ValidationFailure(f"exponent {x} outside the computable set {{1, 2, inf}}")
    p, p1, p2, r1, r2 = values
    if not np.isclose(_inv(p), _inv(p1) + _inv(p2)) or not np.isclose(_inv(p), _inv(r1) + _inv(r2)):
        raise ValidationFailure(f"invalid Hoelder split {values}")
    return values


def product_ratio(f: SpectralScalarField, g: SpectralScalarField, partition: DyadicPartition, s: float,
                  split: Tuple[float, float, float, float, float], q: float = 1.0) -> float:
    p, p1, p2, r1, r2 = split
    lhs = besov_norm(multiply(f, g), partition, BesovIndex(s, p, q, homogeneous=True))
    rhs = (besov_norm(f, partition, BesovIndex(s, p1, q, homogeneous=True)) * lp_norm(g, p2)
           + besov_norm(g, partition, BesovIndex(s, r1, q, homogeneous=True)) * lp_norm(f, r2))
    return lhs / rhs


def verify_product_estimate(partition: DyadicPartition, ensemble: Sequence[Tuple[SpectralScalarField, SpectralScalarField]],
                            s: float, p_splits: Sequence[float], q: float = 1.0,
                            seed: int = 0) -> EmpiricalConstantReport:
    """||fg||_hB^s_p / (||f||_hB^s_p1 ||g||_p2 + ||g||_hB^s_r1 ||f||_r2) over pairs (f, g)"""
    split = check_holder_split(p_splits)
    if len(ensemble) == 0:
        raise ValidationFailure("empty ensemble")
    ratios = [product_ratio(f, g, partition, s, split, q) for f, g in ensemble]
    return EmpiricalConstantReport.from_ratios("product", ratios, seed,
                                               description=f"s={s:g}, split={split}")


# ==================== Suite ====================

def solenoidal_ensemble(grid: Grid, size: int, seed: int) -> List[SpectralVectorField]:
    """Random divergence-free fields, unit L^2 norm"""
    fields = []
    for v in vector_ensemble(grid, size, seed):
        pv = leray_project(v)
        fields.append(pv * (1.0 / pv.energy()))
    return fields


def run_lemma_suite(n: int = 32, ensemble_size: int = 100, seed: int = 0, nu: float = 1.0,
                    include_variant_ii: bool = False, progress: bool = False) -> List[EmpiricalConstantReport]:
    """
    Run every inequality verifier on fresh ensembles drawn from one seed

    Args:
        n: grid points per axis
        ensemble_size: samples per verifier
        seed: base seed; each verifier derives its own stream from it
        nu: diffusivity for the heat-smoothing check
        include_variant_ii: also run the negative-regularity commutator
        progress: show a tqdm bar

    Returns:
        One EmpiricalConstantReport per inequality, in a fixed order
    """
    grid = Grid(n)
    partition = build_partition(grid)
    reports: List[EmpiricalConstantReport] = []

    steps = [
        "bernstein", "product", "commutator", "helical", "heat", "embedding", "lifting", "equivalence",
        "interpolation",
    ]
    bar = tqdm(steps, desc="Lemma suite", disable=not progress)
    for step in bar:
        if step == "bernstein":
            reports.append(verify_bernstein(partition, ensemble_size, 1, 2.0, seed=seed))
            reports.append(verify_bernstein(partition, ensemble_size, 2, 2.0, seed=seed))
        elif step == "product":
            fs = scalar_ensemble(grid, ensemble_size, seed + 1)
            gs = scalar_ensemble(grid, ensemble_size, seed + 2)
            reports.append(verify_product_estimate(partition, list(zip(fs, gs)), 1.5,
                                                   (2, 2, np.inf, 2, np.inf), seed=seed))
        elif step == "commutator":
            vs = solenoidal_ensemble(grid, ensemble_size, seed + 3)
            ts = solenoidal_ensemble(grid, ensemble_size, seed + 4)
            reports.extend(verify_commutator(partition, list(zip(vs, ts)), 1.5, seed=seed,
                                             include_variant_ii=include_variant_ii))
        elif step == "helical":
            vs = solenoidal_ensemble(grid, ensemble_size, seed + 5)
            residuals = [max(wave_split_residuals(v).values()) for v in vs]
            reports.append(EmpiricalConstantReport.from_ratios(
                "helical-identities", residuals, seed,
                description="max residual of P+/- reconstruction, idempotence, orthogonality, rotation identity",
            ))
        elif step == "heat":
            fs = scalar_ensemble(grid, ensemble_size, seed + 6)
            reports.append(verify_heat_smoothing(partition, nu, fs, 1.5, 2.5, [0.01, 0.1, 1.0], seed=seed))
        elif step == "embedding":
            fs = scalar_ensemble(grid, ensemble_size, seed + 7)
            reports.extend(verify_embedding(partition, fs, seed=seed))
        elif step == "lifting":
            fs = scalar_ensemble(grid, ensemble_size, seed + 10)
            reports.append(verify_lifting(partition, fs, 1.0, 1.5, seed=seed))
        elif step == "equivalence":
            fs = scalar_ensemble(grid, ensemble_size, seed + 8)
            reports.append(verify_norm_equivalence(partition, fs, 1.5, seed=seed))
        elif step == "interpolation":
            fs = scalar_ensemble(grid, ensemble_size, seed + 9)
            reports.append(verify_interpolation(partition, fs, 1.0, 3.5, 0.6, seed=seed))

    for report in reports:
        if not report.is_finite():
            logger.warning(f"⚠️ {report.lemma_id}: non-finite empirical constant")
    logger.info(f"✓ Lemma suite complete: {len(reports)} reports (n={n}, samples={ensemble_size}, seed={seed})")
    return reports
