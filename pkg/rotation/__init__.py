"""
Rotation Operators

Leray and helical projections, the Coriolis and heat propagators, and the
verifiers that measure the operator inequalities the analysis rests on.
"""

from .projections import (
    WaveSplit,
    leray_project,
    wave_split,
    helicity_operator,
    unit_cross,
    vertical_cross,
    check_divergence_free,
    coriolis_rotation_term,
    coriolis_rotation_term_helical,
    rotation_identity_residual,
    wave_split_residuals,
    helical_mode,
)
from .propagators import (
    rotation_phase,
    coriolis_propagator,
    coriolis_propagator_helical,
    heat_multiplier,
    heat_propagator,
    LinearPropagator,
)
from .verifiers import (
    heat_smoothing_ratio,
    verify_heat_smoothing,
    commutator_sequence,
    low_high_commutator_sequence,
    verify_commutator,
    check_holder_split,
    product_ratio,
    verify_product_estimate,
    solenoidal_ensemble,
    run_lemma_suite,
)

__all__ = [
    'WaveSplit',
    'leray_project',
    'wave_split',
    'helicity_operator',
    'unit_cross',
    'vertical_cross',
    'check_divergence_free',
    'coriolis_rotation_term',
    'coriolis_rotation_term_helical',
    'rotation_identity_residual',
    'wave_split_residuals',
    'helical_mode',
    'rotation_phase',
    'coriolis_propagator',
    'coriolis_propagator_helical',
    'heat_multiplier',
    'heat_propagator',
    'LinearPropagator',
    'heat_smoothing_ratio',
    'verify_heat_smoothing',
    'commutator_sequence',
    'low_high_commutator_sequence',
    'verify_commutator',
    'check_holder_split',
    'product_ratio',
    'verify_product_estimate',
    'solenoidal_ensemble',
    'run_lemma_suite',
]
