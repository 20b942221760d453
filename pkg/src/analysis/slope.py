"""Diversity order from the log-log slope of an error-rate curve."""

from __future__ import annotations

import math
from typing import Tuple

from ..common.errors import InsufficientData
from .models import FerCurve, FerPoint

MIN_EVENTS = 50


def diversity_slope(curve: FerCurve, window: Tuple[float, float]) -> float:
    """-(log P2 - log P1) / (log rho2 - log rho1) between two curve points.

    Both points need at least MIN_EVENTS error events.
    """
    rho1, rho2 = window
    if rho1 == rho2:
        raise InsufficientData("Slope window needs two distinct rho values")
    p1, p2 = curve.point_at(rho1), curve.point_at(rho2)
    for point in (p1, p2):
        if point.frame_errors < MIN_EVENTS or point.fer <= 0.0:
            raise InsufficientData(
                f"Only {point.frame_errors} error events at rho={point.rho:.6g}, "
                f"need {MIN_EVENTS}"
            )
    return -(math.log(p2.fer) - math.log(p1.fer)) / (math.log(p2.rho) - math.log(p1.rho))


def window_for_levels(curve: FerCurve, upper: float, lower: float) -> Tuple[float, float]:
    """rho values whose estimates lie closest, in log distance, to two levels."""
    usable = [p for p in curve.points if p.fer > 0.0]
    if len(usable) < 2:
        raise InsufficientData("Need at least two points with nonzero estimates")

    def nearest(level: float) -> FerPoint:
        return min(usable, key=lambda p: abs(math.log(p.fer) - math.log(level)))

    a, b = nearest(upper), nearest(lower)
    if a.rho == b.rho:
        raise InsufficientData(f"Levels {upper} and {lower} map to the same point")
    return (a.rho, b.rho)
