"""
Tests for diversity measurement
"""

import pytest

from src.analysis.models import CurveMeta, FerCurve, FerPoint
from src.analysis.slope import MIN_EVENTS, diversity_slope, window_for_levels
from src.common.errors import InsufficientData
from tests.fixtures.test_data import CurveTestDataFactory


class TestDiversitySlope:
    """Test log-log slopes"""

    def test_inverse_square(self):
        """Test c / rho^2 has slope 2"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 100.0])
        assert diversity_slope(curve, (10.0, 100.0)) == pytest.approx(2.0)

    def test_inverse_cube(self):
        """Test c / rho^3 has slope 3"""
        curve = CurveTestDataFactory.power_law(10.0, 3.0, [10.0, 100.0], trials=10**8)
        assert diversity_slope(curve, (10.0, 100.0)) == pytest.approx(3.0, rel=1e-6)

    def test_flat(self):
        """Test a constant curve has slope 0"""
        curve = CurveTestDataFactory.power_law(0.01, 0.0, [1.0, 1000.0])
        assert diversity_slope(curve, (1.0, 1000.0)) == pytest.approx(0.0)

    def test_too_few_events(self):
        """Test points below the event minimum"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 1000.0])
        assert curve.point_at(1000.0).frame_errors < MIN_EVENTS
        with pytest.raises(InsufficientData):
            diversity_slope(curve, (10.0, 1000.0))

    def test_same_point(self):
        """Test a degenerate window"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 100.0])
        with pytest.raises(InsufficientData):
            diversity_slope(curve, (10.0, 10.0))

    def test_missing_point(self):
        """Test windows outside the curve"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 100.0])
        with pytest.raises(KeyError):
            diversity_slope(curve, (10.0, 50.0))

    def test_bound_curve_values(self):
        """Test estimates from bound curves are used when present"""
        points = [
            FerPoint(rho=10.0, trials=10**6, frame_errors=1000, value=1e-2, value_stderr=1e-4),
            FerPoint(rho=100.0, trials=10**6, frame_errors=100, value=1e-4, value_stderr=1e-5),
        ]
        curve = FerCurve(points=points, meta=CurveMeta(kind="outage", spec_hash="0" * 16, seed=1))
        assert diversity_slope(curve, (10.0, 100.0)) == pytest.approx(2.0)


class TestWindowForLevels:
    """Test choosing a slope window by error level"""

    def test_levels(self):
        """Test the points nearest 1e-2 and 1e-4"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 31.6, 100.0, 316.0, 1000.0])
        assert window_for_levels(curve, 1e-2, 1e-4) == (10.0, 100.0)

    def test_zero_points_skipped(self):
        """Test points without errors are ignored"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 100.0, 10**4])
        assert curve.point_at(10**4).fer == 0.0
        assert window_for_levels(curve, 1e-2, 1e-9) == (10.0, 100.0)

    def test_single_usable_point(self):
        """Test curves with one nonzero point"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 10**4])
        with pytest.raises(InsufficientData):
            window_for_levels(curve, 1e-2, 1e-4)

    def test_levels_collapse(self):
        """Test both levels mapping to one point"""
        curve = CurveTestDataFactory.power_law(1.0, 2.0, [10.0, 100.0])
        with pytest.raises(InsufficientData):
            window_for_levels(curve, 1e-2, 5e-3)
