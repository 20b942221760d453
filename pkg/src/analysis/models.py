"""Pydantic models for Monte-Carlo estimates and error-rate curves."""

from __future__ import annotations

import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..common.utils import linear_to_db


class Estimate(BaseModel):
    """Monte-Carlo estimate with its standard error"""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, le=1.0)
    stderr: float = Field(..., ge=0.0)
    trials: int = Field(..., gt=0)
    events: Optional[int] = Field(default=None, ge=0)


class FerPoint(BaseModel):
    """Counters of one SNR point.

    For bound curves the probability comes from value/value_stderr and the
    error counters are zero or the event count.
    """

    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., gt=0, description="Linear SNR 1/sigma2")
    trials: int = Field(..., ge=0)
    frame_errors: int = Field(default=0, ge=0)
    stage1_errors: int = Field(default=0, ge=0)
    stage2_errors: int = Field(default=0, ge=0)
    bp_failures: int = Field(default=0, ge=0)
    value: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    value_stderr: Optional[float] = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def validate_counts(self) -> "FerPoint":
        for name in ("frame_errors", "stage1_errors", "stage2_errors", "bp_failures"):
            if getattr(self, name) > self.trials:
                raise ValueError(f"{name} cannot exceed trials")
        return self

    @property
    def rho_db(self) -> float:
        return linear_to_db(self.rho)

    @property
    def fer(self) -> float:
        if self.value is not None:
            return self.value
        return self.frame_errors / self.trials if self.trials else 0.0

    @property
    def stderr(self) -> float:
        if self.value_stderr is not None:
            return self.value_stderr
        if not self.trials:
            return 0.0
        p = self.fer
        return math.sqrt(p * (1.0 - p) / self.trials)

    @classmethod
    def from_estimate(cls, rho: float, estimate: Estimate) -> "FerPoint":
        events = estimate.events or 0
        return cls(
            rho=rho,
            trials=estimate.trials,
            frame_errors=events,
            value=estimate.value,
            value_stderr=estimate.stderr,
        )


class CurveMeta(BaseModel):
    """Provenance of a curve"""

    kind: Literal["fer", "outage", "slb"]
    spec_hash: str
    seed: int = Field(..., ge=0)
    workers: int = Field(default=1, ge=1)


class FerCurve(BaseModel):
    points: List[FerPoint] = Field(default_factory=list)
    meta: CurveMeta

    def point_at(self, rho: float, rel_tol: float = 1e-9) -> FerPoint:
        for point in self.points:
            if math.isclose(point.rho, rho, rel_tol=rel_tol):
                return point
        raise KeyError(f"No point at rho={rho}")
