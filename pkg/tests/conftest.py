"""
Shared fixtures of the walkerverify test suite.
"""

from typing import Any

import pytest

from walkerverify.catalog import CatalogRegistry, get_catalog
from walkerverify.config import DEFAULT_SEED, ToleranceConfig

# Sample sizes are kept small; acceptance-size runs are marked slow.
TEST_CONFIG: dict[str, Any] = {
    "samples": 40,
    "seed": DEFAULT_SEED,
    "slow_samples": 1000,
}


@pytest.fixture(scope="session")
def test_config() -> dict[str, Any]:
    """Test configuration fixture"""
    return TEST_CONFIG


@pytest.fixture(scope="session")
def catalog() -> CatalogRegistry:
    """The shared catalog"""
    return get_catalog()


@pytest.fixture
def tolerance() -> ToleranceConfig:
    return ToleranceConfig()


@pytest.fixture
def temp_dir(tmp_path):
    """Temporary directory fixture"""
    return tmp_path
