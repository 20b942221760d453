"""Poltyrev outage limit and sphere lower bound under block fading."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaincc, gammaln

from ..channel.fading import sample_gains
from ..common.errors import InvalidInput
from ..latcore.lattice import LatticeSpec, log_det_scaled
from .models import Estimate

CHUNK = 1 << 18
_LOG_2PIE = math.log(2.0 * math.pi * math.e)


def poltyrev_threshold(detG: float, dim: int) -> float:
    """Largest noise variance sigma2_max = |detG|^{2/dim} / (2 pi e)."""
    if detG <= 0:
        raise InvalidInput(f"detG must be positive, got {detG}")
    if dim <= 0:
        raise InvalidInput(f"dim must be positive, got {dim}")
    return math.exp(2.0 * math.log(detG) / dim - _LOG_2PIE)


def _chunks(trials: int):
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        yield size
        done += size


def _gain_batches(
    trials: int, n: int, m: float, rng: np.random.Generator, fixed_h: Optional[Sequence[float]]
):
    if fixed_h is not None:
        h = np.asarray(fixed_h, dtype=float)
        if h.shape != (n,):
            raise InvalidInput(f"fixed_h must have {n} entries")
        for size in _chunks(trials):
            yield np.broadcast_to(h, (size, n))
        return
    for size in _chunks(trials):
        yield sample_gains(size, n, m, rng)


def outage_probability(
    n: int,
    N: int,
    log_det: float,
    rho: float,
    trials: int,
    m: float,
    rng: np.random.Generator,
    fixed_h: Optional[Sequence[float]] = None,
) -> Estimate:
    """Frequency of prod(h^2) < (2 pi e)^n / (det^{2/N} rho^n), in log form."""
    if trials < 1:
        raise InvalidInput(f"trials must be at least 1, got {trials}")
    if rho <= 0:
        raise InvalidInput(f"rho must be positive, got {rho}")
    threshold = n * _LOG_2PIE - 2.0 * log_det / N - n * math.log(rho)

    events = 0
    for gains in _gain_batches(trials, n, m, rng, fixed_h):
        with np.errstate(divide="ignore"):
            log_power = np.sum(2.0 * np.log(gains), axis=1)
        events += int(np.count_nonzero(log_power < threshold))

    p = events / trials
    return Estimate(
        value=p, stderr=math.sqrt(p * (1.0 - p) / trials), trials=trials, events=events
    )


def poltyrev_outage(
    spec: LatticeSpec,
    rho: float,
    trials: int,
    m: float,
    rng: np.random.Generator,
    fixed_h: Optional[Sequence[float]] = None,
) -> Estimate:
    """Poltyrev outage probability of the scaled lattice 2 Lambda at SNR rho."""
    return outage_probability(
        spec.n, spec.N, log_det_scaled(spec), rho, trials, m, rng, fixed_h
    )


def sphere_radius2(n: int, detM: float, gains: np.ndarray) -> np.ndarray:
    """R(h)^2 = (Gamma(n/2+1) detM prod(h))^{2/n} / pi, for each row of gains."""
    with np.errstate(divide="ignore"):
        log_volume = gammaln(n / 2.0 + 1.0) + math.log(detM) + np.sum(np.log(gains), axis=-1)
    return np.exp(2.0 * log_volume / n) / math.pi


def slb(
    n: int,
    N: int,
    detM: float,
    rho: float,
    trials: int,
    m: float,
    rng: np.random.Generator,
    fixed_h: Optional[Sequence[float]] = None,
) -> Estimate:
    """1 - E[(1 - Gbar(n/2, R(h)^2 rho / 2))^N], Gbar the regularized upper
    incomplete Gamma."""
    if detM <= 0:
        raise InvalidInput(f"detM must be positive, got {detM}")
    if trials < 1:
        raise InvalidInput(f"trials must be at least 1, got {trials}")
    if rho <= 0:
        raise InvalidInput(f"rho must be positive, got {rho}")

    total = 0.0
    total_sq = 0.0
    for gains in _gain_batches(trials, n, m, rng, fixed_h):
        tail = gammaincc(n / 2.0, sphere_radius2(n, detM, gains) * rho / 2.0)
        # 1 - (1 - tail)^N without cancellation for tiny tails
        with np.errstate(divide="ignore"):
            values = -np.expm1(N * np.log1p(-tail))
        total += float(np.sum(values))
        total_sq += float(np.sum(values * values))

    mean = total / trials
    variance = max(total_sq / trials - mean * mean, 0.0)
    return Estimate(
        value=min(max(mean, 0.0), 1.0),
        stderr=math.sqrt(variance / trials),
        trials=trials,
    )
