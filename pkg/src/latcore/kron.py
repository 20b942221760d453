"""Products with I_N (x) B without forming the Kronecker product."""

from __future__ import annotations

import numpy as np

from ..common.errors import InvalidInput


def split_blocks(v: np.ndarray, n: int) -> np.ndarray:
    """View a length N*n vector as N rows of n components."""
    values = np.asarray(v)
    if values.ndim != 1 or values.size % n:
        raise InvalidInput(f"Vector of size {values.size} does not split into blocks of {n}")
    return values.reshape(values.size // n, n)


def kron_identity_apply(block: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-vector product u . (I_N (x) block), computed blockwise.

    Block i of the result is u_i . block, where u_i is the i-th slice of u.
    """
    B = np.asarray(block)
    rows = split_blocks(u, B.shape[0])
    return np.einsum("ab,bc->ac", rows, B).reshape(-1)


def kron_identity_solve(block: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Inverse of kron_identity_apply for a square invertible block."""
    B = np.asarray(block, dtype=float)
    rows = split_blocks(x, B.shape[1])
    return np.linalg.solve(B.T, rows.T).T.reshape(-1)
