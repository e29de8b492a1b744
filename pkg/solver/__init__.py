"""
Euler Solver Module

Time evolution of the regularized rotating Euler system:
- IF-RK4 stepping with the exact heat/Coriolis flow factored out
- Picard iteration of the mild formulation
- Run orchestration with diagnostics and artifacts
- Vanishing-viscosity and uniqueness studies
"""

from .settings import SolverConfig
from .trajectory import Trajectory
from .initial_data import taylor_green, beltrami, random_solenoidal, generate, GENERATORS
from .nonlinear import nonlinear_term
from .integrators import IFRK4Integrator, step_ifrk4, check_cfl, cfl_ratio
from .picard import PicardSolver, PicardResult, picard_solve
from .runner import RunResult, run, write_run_report, prepare_initial_data
from .studies import (
    DeltaStudyResult,
    UniquenessReport,
    delta_convergence_study,
    trajectory_gap,
    uniqueness_probe,
)

__all__ = [
    'SolverConfig',
    'Trajectory',
    'taylor_green',
    'beltrami',
    'random_solenoidal',
    'generate',
    'GENERATORS',
    'nonlinear_term',
    'IFRK4Integrator',
    'step_ifrk4',
    'check_cfl',
    'cfl_ratio',
    'PicardSolver',
    'PicardResult',
    'picard_solve',
    'RunResult',
    'run',
    'write_run_report',
    'prepare_initial_data',
    'DeltaStudyResult',
    'UniquenessReport',
    'delta_convergence_study',
    'trajectory_gap',
    'uniqueness_probe',
]
