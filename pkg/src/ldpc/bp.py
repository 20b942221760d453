"""Flooding sum-product decoding in the LLR domain.

LLRs follow log(P(bit=1)/P(bit=0)); a positive posterior decodes to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..common.errors import InvalidInput
from .matrix import SparseBinaryMatrix, syndrome

LLR_CLIP = 50.0
TANH_CLAMP = 19.0
DEFAULT_MAX_ITER = 50

_MAG_CEILING = 1.0 - 1e-15
_LOG_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class BpResult:
    bits: np.ndarray
    converged: bool
    iterations: int
    posterior: np.ndarray


def clip_llr(llr: Sequence[float] | np.ndarray) -> np.ndarray:
    values = np.asarray(llr, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidInput("LLR vector must be finite")
    return np.clip(values, -LLR_CLIP, LLR_CLIP)


def check_to_variable(H: SparseBinaryMatrix, v2c: np.ndarray) -> np.ndarray:
    """Tanh-rule check update for every edge, excluding each edge's own message.

    Under the log(P1/P0) convention the usual rule gains a factor (-1)^deg for
    every check.
    """
    checks, _ = H.edges
    half = np.tanh(np.clip(v2c / 2.0, -TANH_CLAMP, TANH_CLAMP))
    negative = (half < 0).astype(np.int64)
    log_mag = np.log(np.maximum(np.abs(half), _LOG_FLOOR))

    neg_total = np.bincount(checks, weights=negative, minlength=H.n_rows)
    log_total = np.bincount(checks, weights=log_mag, minlength=H.n_rows)

    neg_excl = neg_total[checks].astype(np.int64) - negative
    log_excl = np.minimum(log_total[checks] - log_mag, 0.0)
    magnitude = np.minimum(np.exp(log_excl), _MAG_CEILING)

    degree = np.asarray(H.row_weights(), dtype=np.int64)[checks]
    sign = np.where((neg_excl + degree) % 2 == 1, -1.0, 1.0)
    return np.clip(sign * 2.0 * np.arctanh(magnitude), -LLR_CLIP, LLR_CLIP)


def _decided(H: SparseBinaryMatrix, posterior: np.ndarray) -> tuple[np.ndarray, bool]:
    bits = (posterior > 0).astype(np.uint8)
    ok = not np.any(posterior == 0) and not np.any(syndrome(H, bits))
    return bits, ok


def bp_decode(
    H: SparseBinaryMatrix,
    llr: Sequence[float] | np.ndarray,
    max_iter: int = DEFAULT_MAX_ITER,
) -> BpResult:
    """Decode channel LLRs on the Tanner graph of H.

    Stops as soon as the hard decision satisfies every check with no zero
    posterior; otherwise runs max_iter iterations and reports non-convergence.
    A zero posterior decodes to bit 0.
    """
    channel = clip_llr(llr)
    if channel.shape != (H.n_cols,):
        raise InvalidInput(f"Expected {H.n_cols} LLRs, got shape {channel.shape}")
    if max_iter < 0:
        raise InvalidInput(f"max_iter must be non-negative, got {max_iter}")

    bits, ok = _decided(H, channel)
    if ok:
        return BpResult(bits, True, 0, channel)

    _, variables = H.edges
    v2c = channel[variables]
    posterior = channel
    for iteration in range(1, max_iter + 1):
        c2v = check_to_variable(H, v2c)
        posterior = channel + np.bincount(variables, weights=c2v, minlength=H.n_cols)
        bits, ok = _decided(H, posterior)
        if ok:
            return BpResult(bits, True, iteration, posterior)
        v2c = np.clip(posterior[variables] - c2v, -LLR_CLIP, LLR_CLIP)
    return BpResult(bits, False, max_iter, posterior)
