"""Sparse binary parity-check matrices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Tuple

import numpy as np

from ..common.errors import InvalidInput

# 3x4 example code whose only nonzero codeword is 1011
EXAMPLE_3X4 = ((1, 0, 1, 0), (0, 1, 1, 1), (1, 0, 0, 1))


@dataclass(frozen=True, eq=False)
class SparseBinaryMatrix:
    """Binary matrix stored as sorted row and column adjacency lists"""

    n_rows: int
    n_cols: int
    row_adj: Tuple[Tuple[int, ...], ...]
    col_adj: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.row_adj) != self.n_rows or len(self.col_adj) != self.n_cols:
            raise InvalidInput("Adjacency list counts do not match the shape")
        seen = set()
        for r, cols in enumerate(self.row_adj):
            if list(cols) != sorted(set(cols)):
                raise InvalidInput(f"Row {r} has unsorted or duplicate entries")
            for c in cols:
                if not 0 <= c < self.n_cols:
                    raise InvalidInput(f"Row {r} references column {c} out of range")
                seen.add((r, c))
        count = 0
        for c, rows in enumerate(self.col_adj):
            if list(rows) != sorted(set(rows)):
                raise InvalidInput(f"Column {c} has unsorted or duplicate entries")
            for r in rows:
                if (r, c) not in seen:
                    raise InvalidInput(f"Column {c} lists row {r} inconsistently")
                count += 1
        if count != len(seen):
            raise InvalidInput("Row and column adjacency disagree")

    @classmethod
    def from_rows(
        cls, n_rows: int, n_cols: int, rows: Sequence[Iterable[int]]
    ) -> "SparseBinaryMatrix":
        row_adj = tuple(tuple(sorted(set(int(c) for c in row))) for row in rows)
        col_lists: list[list[int]] = [[] for _ in range(n_cols)]
        for r, cols in enumerate(row_adj):
            for c in cols:
                if not 0 <= c < n_cols:
                    raise InvalidInput(f"Row {r} references column {c} out of range")
                col_lists[c].append(r)
        return cls(n_rows, n_cols, row_adj, tuple(tuple(c) for c in col_lists))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray) -> "SparseBinaryMatrix":
        array = np.asarray(dense, dtype=np.int64)
        if array.ndim != 2:
            raise InvalidInput("Dense matrix must be two-dimensional")
        if np.any((array != 0) & (array != 1)):
            raise InvalidInput("Dense matrix must contain only 0 and 1")
        rows = [np.flatnonzero(row).tolist() for row in array]
        return cls.from_rows(array.shape[0], array.shape[1], rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.row_adj)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for r, cols in enumerate(self.row_adj):
            dense[r, list(cols)] = 1
        return dense

    def row_weights(self) -> Tuple[int, ...]:
        return tuple(len(r) for r in self.row_adj)

    def col_weights(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.col_adj)

    @cached_property
    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Tanner graph edges as (check index, variable index) arrays, row-major."""
        checks = np.repeat(np.arange(self.n_rows), [len(r) for r in self.row_adj])
        variables = np.fromiter(
            (c for cols in self.row_adj for c in cols), dtype=np.int64, count=self.n_edges
        )
        checks.setflags(write=False)
        variables.setflags(write=False)
        return checks, variables

    def select_rows(self, rows: Sequence[int]) -> "SparseBinaryMatrix":
        return SparseBinaryMatrix.from_rows(
            len(rows), self.n_cols, [self.row_adj[r] for r in rows]
        )

    def permute_columns(self, col_perm: Sequence[int]) -> "SparseBinaryMatrix":
        """Matrix whose column i is column col_perm[i] of this one."""
        position = {old: new for new, old in enumerate(col_perm)}
        return SparseBinaryMatrix.from_rows(
            self.n_rows, self.n_cols, [[position[c] for c in row] for row in self.row_adj]
        )

    def kron_identity(self, n: int) -> "SparseBinaryMatrix":
        """H (x) I_n: row j*n+s holds columns i*n+s for every i in row j."""
        rows = [
            [c * n + s for c in cols] for cols in self.row_adj for s in range(n)
        ]
        return SparseBinaryMatrix.from_rows(self.n_rows * n, self.n_cols * n, rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and self.row_adj == other.row_adj

    def __hash__(self) -> int:
        return hash((self.shape, self.row_adj))


def example_3x4() -> SparseBinaryMatrix:
    return SparseBinaryMatrix.from_dense(EXAMPLE_3X4)


def syndrome(H: SparseBinaryMatrix, bits: Sequence[int] | np.ndarray) -> np.ndarray:
    """H . bits over F2"""
    values = np.asarray(bits, dtype=np.int64)
    if values.shape != (H.n_cols,):
        raise InvalidInput(f"Expected {H.n_cols} bits, got shape {values.shape}")
    checks, variables = H.edges
    sums = np.bincount(checks, weights=values[variables], minlength=H.n_rows)
    return (sums.astype(np.int64) % 2).astype(np.uint8)
