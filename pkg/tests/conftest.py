"""
Shared fixtures: grids, partitions, canonical fields and isolated settings
"""

import numpy as np
import pytest

from config.settings import LabSettings, LoggingSettings, RuntimeSettings, VerifyDefaults
from spectral.grid import Grid
from besov.partition import build_partition
from solver.initial_data import random_solenoidal, taylor_green


@pytest.fixture(scope="session")
def grid16():
    return Grid(16)


@pytest.fixture(scope="session")
def grid32():
    return Grid(32)


@pytest.fixture(scope="session")
def partition16(grid16):
    return build_partition(grid16)


@pytest.fixture(scope="session")
def partition32(grid32):
    return build_partition(grid32)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def tg32(grid32):
    return taylor_green(grid32)


@pytest.fixture(scope="session")
def tg16(grid16):
    return taylor_green(grid16)


@pytest.fixture(scope="session")
def random16(grid16):
    return random_solenoidal(grid16, seed=5, k0=2.0, l2=1.0)


@pytest.fixture
def lab_settings(tmp_path):
    """Defaults with outputs under tmp_path, no progress bars and a small verifier suite"""
    return LabSettings(
        logging=LoggingSettings(level="WARNING"),
        runtime=RuntimeSettings(output_root=str(tmp_path / "runs"), progress=False),
        verify_defaults=VerifyDefaults(n=16, ensemble_size=2, seeds=[0, 1]),
    )
