"""
Test fixtures and data factories
"""

from .test_data import (
    ConfigTestDataFactory,
    CurveTestDataFactory,
    LatticeTestDataFactory,
)

__all__ = [
    "ConfigTestDataFactory",
    "CurveTestDataFactory",
    "LatticeTestDataFactory",
]
