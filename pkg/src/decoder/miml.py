"""First decoding stage: per-symbol ML search for the prime-ideal component.

Each n-block of the channel output is decoded on its own in dimension n. The
default "faded" search is exact ML on the faded lattice 2 P H_F, one
closest-point search per value of the block's code symbol. The "equalized"
search divides out the gains, removes the +-1 code symbol with the
noise-reduction matrix and searches 2 P. Either way the residual on the most
reliable component is kept for the binary stage.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from loguru import logger

from ..channel.fading import DEEP_FADE, FadingFrame
from ..clp.search import TIE_TOLERANCE, ClosestPointSolver
from ..common.errors import AllBlocksFaded, InvalidInput, SingularBasis
from ..latcore.kron import kron_identity_apply, split_blocks

LLR_CLIP = 50.0

Selection = Literal["max", "first"]
PrimeSearch = Literal["faded", "equalized"]


@dataclass(frozen=True, eq=False)
class MimlOutput:
    """Per-symbol stage-one decisions.

    y_hat, h_hat: residual and gain of the selected component of each block
    p_hat_sel: scaled prime component 2 z_hat P at the selected component
    z_hat: prime-ideal coordinates, N blocks of n
    p_hat_full: unscaled prime component z_hat . P
    sel_index: selected component of each block
    pivot: strongest gain of the frame (lowest index on ties)
    """

    y_hat: np.ndarray
    h_hat: np.ndarray
    p_hat_sel: np.ndarray
    z_hat: np.ndarray
    p_hat_full: np.ndarray
    sel_index: np.ndarray
    pivot: int = 0


def noise_reduction_matrix(n: int) -> np.ndarray:
    """Identity with first column (1, -1, ..., -1)."""
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    R = np.eye(n, dtype=np.int64)
    R[1:, 0] = -1
    return R


def rcp(R: np.ndarray, j: int) -> np.ndarray:
    """Swap rows 1 and j, then columns 1 and j (1-based)."""
    matrix = np.array(R, copy=True)
    n = matrix.shape[0]
    if not 1 <= j <= n:
        raise InvalidInput(f"RCP index must lie in [1, {n}], got {j}")
    i = j - 1
    matrix[[0, i], :] = matrix[[i, 0], :]
    matrix[:, [0, i]] = matrix[:, [i, 0]]
    return matrix


def pseudo_inv(frame: FadingFrame) -> np.ndarray:
    """diag(1/h_j), with 0 for blocks in deep fade."""
    h = frame.h
    inv = np.zeros_like(h)
    alive = h >= DEEP_FADE
    inv[alive] = 1.0 / h[alive]
    return np.diag(inv)


def rebalance(y: np.ndarray, frame: FadingFrame) -> np.ndarray:
    """Shift y' = 2 h x - 1 + noise to h (2x - 1) + noise."""
    n = frame.n
    return np.asarray(y, dtype=float) + 1.0 - np.tile(frame.h, np.asarray(y).size // n)


def _search_faded_blocks(
    P: np.ndarray, blocks: np.ndarray, frame: FadingFrame, box: int
) -> np.ndarray:
    """ML decisions z_i on the faded lattice 2 P H_F, trying both code symbols.

    Block i is h o (2c - 1 + 2 z P) + noise, so c = 0 searches y + h and c = 1
    searches y - h; the closer of the two wins, ties going to the smaller z
    and then to c = 0.
    """
    h = frame.h
    try:
        solver = ClosestPointSolver(2.0 * P * h)
    except SingularBasis:
        logger.debug(f"Faded lattice is numerically singular for h = {h.tolist()}")
        return _search_erased_blocks(P, blocks, frame, box)

    decisions = []
    for block in blocks:
        best_z: tuple = ()
        best_dist = math.inf
        for target in (block + h, block - h):
            z = tuple(int(v) for v in solver.closest(target))
            dist = solver.distance2(target, z)
            if dist < best_dist - TIE_TOLERANCE or (
                abs(dist - best_dist) <= TIE_TOLERANCE and z < best_z
            ):
                best_z, best_dist = z, dist
        decisions.append(best_z)
    return np.array(decisions, dtype=np.int64)


def _search_equalized_blocks(
    P: np.ndarray, R: np.ndarray, blocks: np.ndarray, frame: FadingFrame, i0: int
) -> np.ndarray:
    """Closest-point decisions z_i for every block, search lattice rows 2 P R'^T."""
    R_sel = rcp(R, i0 + 1).astype(float)
    solver = ClosestPointSolver(2.0 * P @ R_sel.T)
    targets = (blocks @ pseudo_inv(frame)) @ R_sel.T
    return np.array([solver.closest(t) for t in targets], dtype=np.int64)


def _search_erased_blocks(
    P: np.ndarray, blocks: np.ndarray, frame: FadingFrame, box: int
) -> np.ndarray:
    """Exhaustive (z, c) search on the surviving components of a deep-faded frame."""
    n = frame.n
    alive = ~frame.faded()
    coords = np.array(
        list(itertools.product(range(-box, box + 1), repeat=n)), dtype=np.int64
    )
    lattice = 2.0 * coords @ P
    # candidate order: z lexicographic, then c; first minimum wins ties
    symbols = np.stack([lattice - 1.0, lattice + 1.0], axis=1).reshape(-1, n)
    expected = symbols[:, alive] * frame.h[alive]
    observed = blocks[:, alive]
    dist = (
        np.sum(observed**2, axis=1)[:, None]
        - 2.0 * observed @ expected.T
        + np.sum(expected**2, axis=1)[None, :]
    )
    best = np.argmin(dist, axis=1)
    return coords[best // 2]


def mi_ml(
    P: np.ndarray,
    R: np.ndarray,
    y: np.ndarray,
    frame: FadingFrame,
    selection: Selection = "max",
    deep_fade_box: int = 2,
    search: PrimeSearch = "faded",
) -> MimlOutput:
    """Decode the prime component of every n-block of y'.

    P is the embedded prime basis DM (rows). R is the noise-reduction matrix
    of the equalized search (identity disables noise reduction); the faded
    search does not use it. Frames with some blocks in deep fade fall back
    to exhaustive search over z in [-deep_fade_box, deep_fade_box]^n.
    """
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if frame.n != n:
        raise InvalidInput(f"Frame has {frame.n} blocks, lattice dimension is {n}")
    if search not in ("faded", "equalized"):
        raise InvalidInput(f"Unknown prime search {search!r}")
    faded = frame.faded()
    if np.all(faded):
        raise AllBlocksFaded("Every fading block is in deep fade")

    i0 = int(np.argmax(frame.h))
    balanced = split_blocks(rebalance(y, frame), n)
    if np.any(faded):
        logger.debug(f"Deep fade on blocks {np.flatnonzero(faded).tolist()}")
        z_hat = _search_erased_blocks(P, balanced, frame, deep_fade_box)
    elif search == "faded":
        z_hat = _search_faded_blocks(P, balanced, frame, deep_fade_box)
    else:
        z_hat = _search_equalized_blocks(P, np.asarray(R), balanced, frame, i0)

    p_scaled = 2.0 * z_hat @ P
    residual = balanced - frame.h * p_scaled
    if selection == "first":
        sel = np.zeros(balanced.shape[0], dtype=np.int64)
    elif selection == "max":
        sel = np.argmax(np.abs(residual), axis=1)
    else:
        raise InvalidInput(f"Unknown selection rule {selection!r}")

    rows = np.arange(balanced.shape[0])
    return MimlOutput(
        y_hat=residual[rows, sel],
        h_hat=frame.h[sel],
        p_hat_sel=p_scaled[rows, sel],
        z_hat=z_hat.reshape(-1),
        p_hat_full=kron_identity_apply(P, z_hat.reshape(-1)),
        sel_index=sel,
        pivot=i0,
    )


def form_llr(out: MimlOutput, sigma2: float) -> np.ndarray:
    """gamma = 2 h_hat y_hat / sigma2, clipped; positive favours bit 1."""
    if sigma2 <= 0:
        raise InvalidInput(f"sigma2 must be positive, got {sigma2}")
    return np.clip(2.0 * out.h_hat * out.y_hat / sigma2, -LLR_CLIP, LLR_CLIP)
