"""Closest lattice point search: Babai nearest plane and Schnorr-Euchner.

Lattice points are row combinations z . B of the basis rows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..common.errors import InvalidInput, SingularBasis, Unsupported

MAX_DIMENSION = 16
BRUTE_FORCE_MAX_DIMENSION = 4
TIE_TOLERANCE = 1e-12
RANK_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class LatticeBasis:
    B: np.ndarray

    def __post_init__(self) -> None:
        B = np.array(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise InvalidInput(f"Basis must be square, got shape {B.shape}")
        if B.shape[0] > MAX_DIMENSION:
            raise Unsupported(
                f"Dimension {B.shape[0]} exceeds the supported {MAX_DIMENSION}"
            )
        singular = np.linalg.svd(B, compute_uv=False)
        if singular[-1] <= RANK_TOLERANCE * singular[0]:
            raise SingularBasis(f"Basis is rank deficient (singular values {singular})")
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def d(self) -> int:
        return self.B.shape[0]

    @cached_property
    def smallest_singular_value(self) -> float:
        return float(np.linalg.svd(self.B, compute_uv=False)[-1])


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _lex_better(candidate: Tuple[int, ...], dist: float, best: Tuple[int, ...], best_dist: float) -> bool:
    if dist < best_dist - TIE_TOLERANCE:
        return True
    return abs(dist - best_dist) <= TIE_TOLERANCE and candidate < best


class ClosestPointSolver:
    """Exact closest-point search against one basis, reusable across targets.

    The QR factorization of B^T is computed once; each query works on plain
    Python floats.
    """

    def __init__(self, basis: LatticeBasis | np.ndarray):
        if not isinstance(basis, LatticeBasis):
            basis = LatticeBasis(np.asarray(basis, dtype=float))
        self.basis = basis
        q, r = np.linalg.qr(basis.B.T)
        self._q = q
        self._r: List[List[float]] = r.tolist()
        self._d = basis.d

    def _rotate(self, target: Sequence[float] | np.ndarray) -> List[float]:
        t = np.asarray(target, dtype=float)
        if t.shape != (self._d,):
            raise InvalidInput(f"Target must have length {self._d}, got {t.shape}")
        return (self._q.T @ t).tolist()

    def distance2(self, target: Sequence[float] | np.ndarray, z: Sequence[int]) -> float:
        diff = np.asarray(target, dtype=float) - np.asarray(z, dtype=float) @ self.basis.B
        return float(diff @ diff)

    def babai(self, target: Sequence[float] | np.ndarray) -> np.ndarray:
        y = self._rotate(target)
        r = self._r
        z = [0] * self._d
        for i in range(self._d - 1, -1, -1):
            acc = y[i] - sum(r[i][j] * z[j] for j in range(i + 1, self._d))
            z[i] = _round_half_up(acc / r[i][i])
        return np.array(z, dtype=np.int64)

    def closest(self, target: Sequence[float] | np.ndarray) -> np.ndarray:
        y = self._rotate(target)
        r = self._r
        d = self._d

        start = self.babai(target)
        best_z = tuple(int(v) for v in start)
        best_dist = self.distance2(target, best_z)
        z = [0] * d

        def search(level: int, partial: float) -> None:
            nonlocal best_z, best_dist
            acc = y[level] - sum(r[level][j] * z[j] for j in range(level + 1, d))
            diag = r[level][level]
            center = acc / diag
            lower = math.floor(center)
            upper = lower + 1
            # zig-zag: visit integers in nondecreasing distance from center
            while True:
                if center - lower <= upper - center:
                    value = lower
                    lower -= 1
                else:
                    value = upper
                    upper += 1
                step = (acc - diag * value) ** 2
                dist = partial + step
                if dist > best_dist + TIE_TOLERANCE:
                    return
                z[level] = value
                if level == 0:
                    candidate = tuple(z)
                    if _lex_better(candidate, dist, best_z, best_dist):
                        best_z, best_dist = candidate, dist
                else:
                    search(level - 1, dist)

        search(d - 1, 0.0)
        return np.array(best_z, dtype=np.int64)


def closest_point(basis: LatticeBasis | np.ndarray, target: Sequence[float] | np.ndarray) -> np.ndarray:
    """Integer z minimizing ||target - z B||^2; ties go to the lexicographically
    smallest z."""
    return ClosestPointSolver(basis).closest(target)


def babai(basis: LatticeBasis | np.ndarray, target: Sequence[float] | np.ndarray) -> np.ndarray:
    return ClosestPointSolver(basis).babai(target)


def brute_force_closest(
    basis: LatticeBasis | np.ndarray,
    target: Sequence[float] | np.ndarray,
    box_radius: Optional[int] = None,
) -> np.ndarray:
    """Exhaustive search over the integer box around the Babai point.

    Without box_radius the box is wide enough to contain every point no
    farther than the Babai point, which makes the result exact.
    """
    solver = ClosestPointSolver(basis)
    d = solver.basis.d
    if d > BRUTE_FORCE_MAX_DIMENSION:
        raise Unsupported(f"Brute force limited to d <= {BRUTE_FORCE_MAX_DIMENSION}")

    center = solver.babai(target)
    if box_radius is None:
        radius = math.sqrt(solver.distance2(target, center))
        box_radius = int(math.ceil(2.0 * radius / solver.basis.smallest_singular_value)) + 1

    offsets = np.array(
        list(itertools.product(range(-box_radius, box_radius + 1), repeat=d)),
        dtype=np.int64,
    )
    candidates = center + offsets
    diff = np.asarray(target, dtype=float) - candidates @ solver.basis.B
    dist = np.einsum("ij,ij->i", diff, diff)
    best = float(dist.min())
    tied = candidates[dist <= best + TIE_TOLERANCE]
    winner = min(tuple(int(v) for v in row) for row in tied)
    return np.array(winner, dtype=np.int64)
