"""Nakagami-m block fading with AWGN on the scaled lattice.

Fading gains are normalized to E[h^2] = 1, so rho = 1/sigma2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..common.errors import InvalidInput

DEEP_FADE = 1e-12


@dataclass(frozen=True, eq=False)
class FadingFrame:
    """Per-block fading magnitudes, constant over one frame"""

    h: np.ndarray

    def __post_init__(self) -> None:
        h = np.array(self.h, dtype=float).reshape(-1)
        if h.size == 0:
            raise InvalidInput("A fading frame needs at least one block")
        if np.any(h < 0) or not np.all(np.isfinite(h)):
            raise InvalidInput(f"Fading magnitudes must be finite and >= 0, got {h}")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.h.size

    def faded(self) -> np.ndarray:
        """Mask of blocks in deep fade."""
        return self.h < DEEP_FADE


class ChannelParams(BaseModel):
    """Noise variance, Nakagami shape and RNG seed of one simulated point"""

    model_config = ConfigDict(frozen=True)

    sigma2: float = Field(..., gt=0, description="Noise variance per real dimension")
    nakagami_m: float = Field(default=1.0, gt=0, description="1.0 is Rayleigh")
    rng_seed: int = Field(default=0, ge=0)

    @classmethod
    def from_rho(cls, rho: float, nakagami_m: float = 1.0, rng_seed: int = 0) -> "ChannelParams":
        if rho <= 0:
            raise InvalidInput(f"rho must be positive, got {rho}")
        return cls(sigma2=1.0 / rho, nakagami_m=nakagami_m, rng_seed=rng_seed)


def sample_gains(frames: int, n: int, m: float, rng: np.random.Generator) -> np.ndarray:
    """(frames, n) array of magnitudes h = sqrt(g), g ~ Gamma(m, 1/m)."""
    if m <= 0:
        raise InvalidInput(f"Nakagami shape must be positive, got {m}")
    return np.sqrt(rng.gamma(shape=m, scale=1.0 / m, size=(frames, n)))


def sample_fading(n: int, m: float, rng: np.random.Generator) -> FadingFrame:
    return FadingFrame(sample_gains(1, n, m, rng)[0])


def fixed_frame(h: Sequence[float]) -> FadingFrame:
    return FadingFrame(np.asarray(h, dtype=float))


def transmit(
    x: Sequence[float] | np.ndarray,
    frame: FadingFrame,
    sigma2: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """y' = 2 (I_N (x) H_F) x - 1 + noise, component j of each block faded by h_j."""
    values = np.asarray(x, dtype=float)
    if values.ndim != 1 or values.size % frame.n:
        raise InvalidInput(
            f"Point of length {values.size} does not split into blocks of {frame.n}"
        )
    if sigma2 < 0:
        raise InvalidInput(f"sigma2 must be non-negative, got {sigma2}")
    gains = np.tile(frame.h, values.size // frame.n)
    noise = rng.normal(0.0, math.sqrt(sigma2), size=values.size)
    return 2.0 * gains * values - 1.0 + noise
