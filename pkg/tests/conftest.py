"""Shared test fixtures and utilities.

This module provides common fixtures and helper functions used across
the test suite to reduce code duplication.
"""

from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from sdflab.core.config import ExperimentConfig
from sdflab.core.grid import BinaryVolume, linear_index
from tests.utils.volumes import box_mask, tiny_config


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run long oracle sweeps and the scaled replication",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# =============================================================================
# CLI Fixtures
# =============================================================================


@pytest.fixture
def runner() -> CliRunner:
    """Create a CLI test runner."""
    return CliRunner()


# =============================================================================
# Volume Fixtures
# =============================================================================


@pytest.fixture
def lattice_probe():
    """Check the x-fastest linear index of one nontrivial voxel.

    Returns a callable taking dims, a linear sequence and the matching
    ``[i, j, k]`` array; voxel (1, 2, 1) must sit at ``1 + nx * (2 + ny)``.
    """

    def probe(dims: tuple[int, int, int], linear, voxels) -> None:
        index = linear_index(dims, 1, 2, 1)
        assert index == 1 + dims[0] * (2 + dims[1] * 1)
        assert np.asarray(linear)[index] == np.asarray(voxels)[1, 2, 1]

    return probe


@pytest.fixture
def cube_16() -> BinaryVolume:
    """Solid 6^3 cube inside a 16^3 grid."""
    return box_mask((16, 16, 16), (5, 5, 5), (11, 11, 11))


# =============================================================================
# Config Fixtures
# =============================================================================


@pytest.fixture
def tiny_experiment(tmp_path) -> ExperimentConfig:
    return tiny_config(tmp_path / "runs")


@pytest.fixture
def tiny_config_file(tmp_path) -> Path:
    """JSON config file for CLI tests; output goes under ``tmp_path/runs``."""
    path = tmp_path / "config.json"
    path.write_text(
        tiny_config(tmp_path / "runs").model_dump_json(indent=2), encoding="utf-8"
    )
    return path
