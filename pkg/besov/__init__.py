"""
Littlewood-Paley and Besov Module

Discrete Littlewood-Paley calculus on the periodic grid:
- Dyadic partition of unity, blocks Delta_j, low-pass S_k and psi
- Homogeneous and inhomogeneous Besov norms for p, q in {1, 2, inf}
- Seeded random ensembles and empirical-constant verifiers
"""

from .partition import DyadicPartition, build_partition, lp_block, low_pass, psi_block, low_pass_profile, bump_profile
from .norms import BesovIndex, TRACKED_INDICES, besov_norm, besov_norms, block_norms, sequence_norm
from .ensembles import (
    random_scalar,
    random_vector,
    shell_scalar,
    scalar_ensemble,
    vector_ensemble,
    shell_ensemble,
    interior_shells,
    hermitian_part,
)
from .reports import EmpiricalConstantReport, reports_to_frame, write_reports_csv, read_reports_csv
from .verifiers import (
    bernstein_ratio,
    verify_bernstein,
    verify_embedding,
    verify_lifting,
    verify_norm_equivalence,
    verify_interpolation,
)

__all__ = [
    'DyadicPartition',
    'build_partition',
    'lp_block',
    'low_pass',
    'psi_block',
    'low_pass_profile',
    'bump_profile',
    'BesovIndex',
    'TRACKED_INDICES',
    'besov_norm',
    'besov_norms',
    'block_norms',
    'sequence_norm',
    'random_scalar',
    'random_vector',
    'shell_scalar',
    'scalar_ensemble',
    'vector_ensemble',
    'shell_ensemble',
    'interior_shells',
    'hermitian_part',
    'EmpiricalConstantReport',
    'reports_to_frame',
    'write_reports_csv',
    'read_reports_csv',
    'bernstein_ratio',
    'verify_bernstein',
    'verify_embedding',
    'verify_lifting',
    'verify_norm_equivalence',
    'verify_interpolation',
]
