"""Two-stage decoding of a received frame: prime stage, then BP on the code."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..channel.fading import FadingFrame
from ..common.models import DecoderConfig
from ..latcore.lattice import LatticePoint, LatticeSpec
from ..ldpc.bp import bp_decode
from .miml import MimlOutput, form_llr, mi_ml, noise_reduction_matrix

MATCH_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Decoded point (unscaled) with stage diagnostics.

    stage1_ok and stage2_ok are None unless ground truth was supplied.
    """

    x_hat: np.ndarray
    c_hat: np.ndarray
    z_hat: np.ndarray
    bp_converged: bool
    bp_iterations: int
    miml: MimlOutput
    stage1_ok: Optional[bool] = None
    stage2_ok: Optional[bool] = None
    frame_ok: Optional[bool] = None


def full_decode(
    spec: LatticeSpec,
    y: np.ndarray,
    frame: FadingFrame,
    sigma2: float,
    config: DecoderConfig = DecoderConfig(),
    truth: Optional[LatticePoint] = None,
) -> DecodeResult:
    """Decode y' and, given the transmitted point, classify the error.

    The scaled estimate (2c - 1) (x) 1 + 2 z P maps back to c (x) 1 + z P.
    A frame is wrong when either the code bits or the prime component differ.
    """
    n = spec.n
    P = spec.prime.embed_DM
    R = noise_reduction_matrix(n) if config.noise_reduction else np.eye(n, dtype=np.int64)

    out = mi_ml(
        P, R, y, frame, config.selection, config.deep_fade_box, config.prime_search
    )
    llr = form_llr(out, sigma2)
    bp = bp_decode(spec.code.H, llr, config.max_iter)

    x_scaled = np.repeat(2.0 * bp.bits - 1.0, n) + 2.0 * out.p_hat_full
    x_hat = (x_scaled + 1.0) / 2.0

    stage1_ok = stage2_ok = frame_ok = None
    if truth is not None:
        p_true = truth.x - np.repeat(truth.c.astype(float), n)
        stage1_ok = bool(np.allclose(out.p_hat_full, p_true, rtol=0.0, atol=MATCH_TOLERANCE))
        stage2_ok = bool(np.array_equal(bp.bits, truth.c))
        frame_ok = bool(np.allclose(x_hat, truth.x, rtol=0.0, atol=MATCH_TOLERANCE))

    return DecodeResult(
        x_hat=x_hat,
        c_hat=bp.bits,
        z_hat=out.z_hat,
        bp_converged=bp.converged,
        bp_iterations=bp.iterations,
        miml=out,
        stage1_ok=stage1_ok,
        stage2_ok=stage2_ok,
        frame_ok=frame_ok,
    )
