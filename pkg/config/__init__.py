"""
Configuration Management
"""

from .settings import LabSettings, get_settings
from .scenario import ScenarioSpec, DataSpec, parse_config, render_scenario, load_scenario

__all__ = [
    "LabSettings",
    "get_settings",
    "ScenarioSpec",
    "DataSpec",
    "parse_config",
    "render_scenario",
    "load_scenario",
]
