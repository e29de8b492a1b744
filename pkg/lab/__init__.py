"""
Lab Command Line

Scenario execution, run reports and the reulab entry point.
"""

from .pipelines import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    EXIT_ABORT,
    ExecutionResult,
    ScenarioExecutor,
    default_verify_spec,
    execute,
    prepare_run_dir,
)
from .reporting import Check, RunReport, read_report, report

__all__ = [
    'EXIT_OK',
    'EXIT_USAGE',
    'EXIT_VALIDATION',
    'EXIT_ABORT',
    'ExecutionResult',
    'ScenarioExecutor',
    'default_verify_spec',
    'execute',
    'prepare_run_dir',
    'Check',
    'RunReport',
    'read_report',
    'report',
]
