"""
Diagnostics Module

Observables of a run and of the dispersive propagator:
- Energy, tracked Besov norms, ||grad u||_inf and the BKM functional U(t)
- Gronwall envelope fit and time-integrated norms
- Strichartz decay measurement

The rotation sweep drives full solver runs and is imported as
diagnostics.sweep.
"""

from .series import (
    DiagnosticsSeries,
    GronwallFit,
    bkm_update,
    gronwall_envelope,
    fit_gronwall_constants,
    time_lr_norm,
    read_diagnostics_csv,
    concatenate,
)
from .strichartz import (
    StrichartzReport,
    strichartz_decay,
    gaussian_packet,
    default_decay_experiment,
)

__all__ = [
    'DiagnosticsSeries',
    'GronwallFit',
    'bkm_update',
    'gronwall_envelope',
    'fit_gronwall_constants',
    'time_lr_norm',
    'read_diagnostics_csv',
    'concatenate',
    'StrichartzReport',
    'strichartz_decay',
    'gaussian_packet',
    'default_decay_experiment',
]
