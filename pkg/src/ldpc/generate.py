"""Random regular LDPC parity-check matrices."""

from __future__ import annotations

import numpy as np
from loguru import logger

from ..common.errors import InvalidInput
from .matrix import SparseBinaryMatrix

MAX_REPAIR_ROUNDS = 100

# A repeated edge costs more than any 4-cycle it could remove
_DUPLICATE_PENALTY = 1000


def _pairs(values: np.ndarray) -> int:
    return int(np.sum(values * (values - 1) // 2))


def count_four_cycles(H: SparseBinaryMatrix) -> int:
    """Number of length-4 cycles: column pairs counted once per shared row pair."""
    dense = H.to_dense().astype(np.int64)
    overlap = dense.T @ dense
    np.fill_diagonal(overlap, 0)
    return _pairs(overlap) // 2


def _column_cost(A: np.ndarray, c: int) -> int:
    overlap = A[:, c] @ A
    overlap[c] = 0
    duplicates = int(np.sum(np.maximum(A[:, c] - 1, 0)))
    return _pairs(overlap) + _DUPLICATE_PENALTY * duplicates


def _local_cost(A: np.ndarray, c1: int, c2: int) -> int:
    shared = int(A[:, c1] @ A[:, c2])
    return _column_cost(A, c1) + _column_cost(A, c2) - shared * (shared - 1) // 2


def _bad_columns(A: np.ndarray) -> np.ndarray:
    overlap = A.T @ A
    np.fill_diagonal(overlap, 0)
    bad = np.any(overlap >= 2, axis=0) | np.any(A > 1, axis=0)
    return np.flatnonzero(bad)


def gen_regular(N: int, wc: int, wr: int, seed: int) -> SparseBinaryMatrix:
    """(wc, wr)-regular parity-check matrix with N columns and N*wc/wr rows.

    Edges come from a random socket matching; repeated edges and 4-cycles are
    then removed where possible by degree-preserving edge swaps.
    """
    if wc < 2:
        raise InvalidInput(f"Column weight must be at least 2, got {wc}")
    if wr < 2:
        raise InvalidInput(f"Row weight must be at least 2, got {wr}")
    if N <= 0 or (N * wc) % wr != 0:
        raise InvalidInput(
            f"N*wc = {N * wc} is not divisible by the row weight {wr}"
        )
    M = N * wc // wr
    if wr > N or wc > M:
        raise InvalidInput(f"Degrees ({wc}, {wr}) infeasible for a {M}x{N} matrix")

    rng = np.random.default_rng(seed)
    edge_cols = np.repeat(np.arange(N), wc)
    edge_rows = rng.permutation(np.repeat(np.arange(M), wr))

    A = np.zeros((M, N), dtype=np.int64)
    np.add.at(A, (edge_rows, edge_cols), 1)

    for round_index in range(MAX_REPAIR_ROUNDS):
        bad = _bad_columns(A)
        if bad.size == 0:
            break
        bad_set = set(bad.tolist())
        candidates = [e for e in range(edge_cols.size) if edge_cols[e] in bad_set]
        for e in candidates:
            f = int(rng.integers(edge_cols.size))
            r1, c1 = edge_rows[e], edge_cols[e]
            r2, c2 = edge_rows[f], edge_cols[f]
            if c1 == c2 or r1 == r2:
                continue
            before = _local_cost(A, c1, c2)
            A[r1, c1] -= 1
            A[r2, c2] -= 1
            A[r2, c1] += 1
            A[r1, c2] += 1
            if _local_cost(A, c1, c2) < before:
                edge_rows[e], edge_rows[f] = r2, r1
            else:
                A[r2, c1] -= 1
                A[r1, c2] -= 1
                A[r1, c1] += 1
                A[r2, c2] += 1
        logger.debug(f"Repair round {round_index + 1}: {bad.size} offending columns")

    duplicates = int(np.sum(np.maximum(A - 1, 0)))
    if duplicates:
        logger.warning(f"{duplicates} repeated edges remain; those entries collapse")
    H = SparseBinaryMatrix.from_dense((A > 0).astype(np.uint8))
    cycles = count_four_cycles(H)
    if cycles:
        logger.info(f"Generated {M}x{N} code keeps {cycles} four-cycles")
    else:
        logger.debug(f"Generated {M}x{N} ({wc},{wr})-regular code without four-cycles")
    return H
