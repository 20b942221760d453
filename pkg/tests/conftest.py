"""
Shared test configuration and fixtures for divlat
"""

import json
import tempfile
from pathlib import Path

import pytest

# Disable loguru during tests to reduce noise
import loguru

from src.common.utils import make_rng
from src.numfield.field import build_cubic_example, build_quadratic
from tests.fixtures.test_data import (
    CUBIC,
    QUADRATIC_10,
    ConfigTestDataFactory,
    LatticeTestDataFactory,
)

loguru.logger.disable("src")


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files"""
    with tempfile.TemporaryDirectory() as tmp:
        yield Path(tmp)


@pytest.fixture
def rng():
    """Deterministic generator for test data"""
    return make_rng(20240115)


@pytest.fixture(scope="session")
def sqrt10_field():
    return build_quadratic(10)


@pytest.fixture(scope="session")
def sqrt17_field():
    return build_quadratic(17)


@pytest.fixture(scope="session")
def cubic_field():
    return build_cubic_example()


@pytest.fixture(scope="session")
def sqrt10_spec():
    """Q(sqrt(10)) with the 3x4 example code: n=2, N=4, k=1"""
    return LatticeTestDataFactory.spec(QUADRATIC_10)


@pytest.fixture(scope="session")
def cubic_spec():
    """Cubic example field with the 3x4 example code: n=3, N=4, k=1"""
    return LatticeTestDataFactory.spec(CUBIC)


@pytest.fixture
def run_config():
    """Valid run configuration as a JSON-ready dict"""
    return ConfigTestDataFactory.run_config()


@pytest.fixture
def config_file(temp_dir, run_config):
    """Run configuration written to disk"""
    path = temp_dir / "run.json"
    path.write_text(json.dumps(run_config), encoding="utf-8")
    return path
