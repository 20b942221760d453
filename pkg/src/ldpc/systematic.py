"""Systematic form and encoding of binary linear codes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger

from ..common.errors import InvalidInput
from .matrix import SparseBinaryMatrix


@dataclass(frozen=True, eq=False)
class SystematicCode:
    """Code with generator G = [I_k | A] in the column order col_perm.

    Column i of H (and of every codeword) is column col_perm[i] of the
    parity-check matrix the code was built from. H keeps only linearly
    independent rows of that matrix.
    """

    N: int
    k: int
    A: np.ndarray
    col_perm: Tuple[int, ...]
    H: SparseBinaryMatrix

    def generator(self) -> np.ndarray:
        return np.hstack([np.eye(self.k, dtype=np.uint8), self.A]).astype(np.uint8)


def _independent_rows(dense: np.ndarray) -> List[int]:
    """Indices of original rows forming a basis of the row space, first-come."""
    basis: List[Tuple[int, np.ndarray]] = []
    keep: List[int] = []
    for index, row in enumerate(dense):
        v = row.copy()
        for pivot, b in basis:
            if v[pivot]:
                v ^= b
        nonzero = np.flatnonzero(v)
        if nonzero.size:
            basis.append((int(nonzero[-1]), v))
            keep.append(index)
    return keep


def systematize(H: SparseBinaryMatrix) -> SystematicCode:
    """Gaussian elimination over F2, pivots taken from the rightmost columns.

    Free columns come first and pivot columns last in col_perm, so codewords are
    (message, parity). Redundant rows are dropped and k = N - rank.
    """
    dense = H.to_dense()
    keep = _independent_rows(dense)
    if len(keep) < H.n_rows:
        logger.debug(f"Dropping {H.n_rows - len(keep)} redundant parity checks")

    reduced = dense[keep].copy()
    rank = len(keep)
    pivot_rows: dict[int, int] = {}
    row = 0
    for col in range(H.n_cols - 1, -1, -1):
        if row == rank:
            break
        hits = np.flatnonzero(reduced[row:, col])
        if hits.size == 0:
            continue
        pick = row + int(hits[0])
        if pick != row:
            reduced[[row, pick]] = reduced[[pick, row]]
        others = np.flatnonzero(reduced[:, col])
        for r in others:
            if r != row:
                reduced[r] ^= reduced[row]
        pivot_rows[col] = row
        row += 1

    pivots = sorted(pivot_rows)
    pivot_set = set(pivots)
    free = [c for c in range(H.n_cols) if c not in pivot_set]
    col_perm = tuple(free + pivots)

    # parity bit of pivot column p equals the sum of free bits where its row has ones
    A = np.zeros((len(free), len(pivots)), dtype=np.uint8)
    for j, p in enumerate(pivots):
        A[:, j] = reduced[pivot_rows[p], free]

    code = SystematicCode(
        N=H.n_cols,
        k=len(free),
        A=A,
        col_perm=col_perm,
        H=H.select_rows(keep).permute_columns(col_perm),
    )
    logger.debug(f"Systematized code: N={code.N}, k={code.k}, rank={rank}")
    return code


def encode_bits(code: SystematicCode, msg: Sequence[int] | np.ndarray) -> np.ndarray:
    """Codeword (msg, msg . A) in the code's column order."""
    bits = np.asarray(msg, dtype=np.int64)
    if bits.shape != (code.k,):
        raise InvalidInput(f"Message must have {code.k} bits, got shape {bits.shape}")
    parity = (bits @ code.A.astype(np.int64)) % 2
    return np.concatenate([bits % 2, parity]).astype(np.uint8)
