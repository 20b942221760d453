"""Primes of residue degree 1 above 2 and reduction modulo them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import sympy
from loguru import logger
from sympy.matrices.normalforms import hermite_normal_form

from ..common.errors import ConstructionError, InvalidInput, NoLinearFactor
from .field import RealNumberField, _X, mul_in_OK


@dataclass(frozen=True)
class Mod2Factorization:
    """Linear factors of f mod 2 as (root bit, multiplicity), plus leftover degree"""

    linear: Tuple[Tuple[int, int], ...]
    residual: int

    def multiplicity(self, root_bit: int) -> int:
        for bit, mult in self.linear:
            if bit == root_bit:
                return mult
        return 0

    def total_degree(self) -> int:
        return sum(mult for _, mult in self.linear) + self.residual


@dataclass(frozen=True, eq=False)
class PrimeIdealAbove2:
    """Prime P above 2 with O_K/P = F2.

    D rows are a Z-basis of P in integral-basis coordinates (lower triangular,
    positive diagonal); embed_DM = D . M.
    """

    gen_linear_root: int
    D: Tuple[Tuple[int, ...], ...]
    embed_DM: np.ndarray
    ram_index: int
    residue_degree: int = 1

    @property
    def n(self) -> int:
        return len(self.D)

    def det_D(self) -> int:
        return int(sympy.Matrix(self.D).det())

    def D_array(self) -> np.ndarray:
        return np.array(self.D, dtype=np.int64)


def factor_mod2_linear(poly) -> Mod2Factorization:
    """Multiplicities of x and x+1 in f mod 2, by repeated evaluation and division."""
    coeffs = poly.coeffs if hasattr(poly, "coeffs") else tuple(poly)
    remaining = sympy.Poly([int(c) for c in coeffs[::-1]], _X, modulus=2)

    linear: List[Tuple[int, int]] = []
    for bit in (0, 1):
        divisor = sympy.Poly(_X - bit, _X, modulus=2)
        mult = 0
        while remaining.degree() > 0 and remaining.eval(bit) % 2 == 0:
            remaining = remaining.quo(divisor)
            mult += 1
        if mult:
            linear.append((bit, mult))
    return Mod2Factorization(linear=tuple(linear), residual=max(remaining.degree(), 0))


def default_root_bit(field: RealNumberField) -> int:
    """Lowest root bit of a linear factor of the minpoly mod 2."""
    factorization = factor_mod2_linear(field.minpoly)
    if not factorization.linear:
        raise NoLinearFactor(f"{field.minpoly} has no linear factor mod 2")
    return factorization.linear[0][0]


def _power_to_integral(field: RealNumberField, coords: Sequence[int]) -> List[int]:
    if field.power_basis_integral():
        return [int(c) for c in coords]
    basis = sympy.Matrix(field.basis_coords)
    solved = sympy.Matrix([list(coords)]) * basis.inv()
    if any(not value.is_integer for value in solved):
        raise InvalidInput(f"{tuple(coords)} is not integral")
    return [int(value) for value in solved]


def ideal_generators(field: RealNumberField, root_bit: int) -> List[List[int]]:
    """Integral-basis coordinates of 2 w_i and (theta + root_bit) w_i, interleaved."""
    shift = tuple(
        t + (root_bit if i == 0 else 0) for i, t in enumerate(field.theta_coords)
    )
    generators: List[List[int]] = []
    for row in field.basis_coords:
        omega = [int(c) for c in row]
        generators.append(_power_to_integral(field, [2 * c for c in omega]))
        generators.append(_power_to_integral(field, mul_in_OK(field, shift, omega)))
    return generators


def hnf_basis(generators: Sequence[Sequence[int]], n: int) -> Tuple[Tuple[int, ...], ...]:
    """Rows of the Hermite normal form of the lattice the generators span.

    The form depends only on the lattice, not on the order of the generators.
    """
    hnf = hermite_normal_form(sympy.Matrix([list(g) for g in generators]).T)
    if hnf.shape != (n, n):
        raise ConstructionError(f"Ideal generators span rank {hnf.shape[1]}, not {n}")
    return tuple(tuple(int(hnf[j, i]) for j in range(n)) for i in range(n))


def prime_above_2(field: RealNumberField, root_bit: int) -> PrimeIdealAbove2:
    """The prime 2 O_K + (theta + root_bit) O_K, as an HNF basis."""
    if root_bit not in (0, 1):
        raise InvalidInput(f"root_bit must be 0 or 1, got {root_bit}")
    factorization = factor_mod2_linear(field.minpoly)
    multiplicity = factorization.multiplicity(root_bit)
    if multiplicity == 0:
        raise NoLinearFactor(
            f"x + {root_bit} does not divide {field.minpoly} mod 2"
        )

    D = hnf_basis(ideal_generators(field, root_bit), field.n)

    det = int(sympy.Matrix(D).det())
    if abs(det) != 2:
        raise ConstructionError(f"Prime basis has determinant {det}, expected +-2")

    embed_DM = field.embed(np.array(D, dtype=float))
    embed_DM.setflags(write=False)
    logger.debug(f"Prime above 2 for {field!r}, root {root_bit}: D={D}")
    return PrimeIdealAbove2(
        gen_linear_root=root_bit,
        D=D,
        embed_DM=embed_DM,
        ram_index=multiplicity,
        residue_degree=1,
    )


def _reduce(D: Tuple[Tuple[int, ...], ...], v: Sequence[int]) -> int:
    """Reduce v by the rows of D, last row first; the remainder left at the
    pivot equal to 2 is the residue bit."""
    rest = [int(c) for c in v]
    residue = 0
    for i in range(len(D) - 1, -1, -1):
        pivot = D[i][i]
        q = rest[i] // pivot
        if q:
            rest = [r - q * d for r, d in zip(rest, D[i])]
        if pivot == 2:
            residue = rest[i]
    return residue


def residue_mod_prime(
    field: RealNumberField, prime: PrimeIdealAbove2, v: Sequence[int]
) -> int:
    """Image in F2 of the element with integral-basis coordinates v."""
    if len(v) != field.n:
        raise InvalidInput(f"Coordinate vector must have length {field.n}")
    return _reduce(prime.D, v)


def residue_map_vector(field: RealNumberField, prime: PrimeIdealAbove2) -> Tuple[int, ...]:
    """Bits r with residue(v) = sum(r_i v_i) mod 2.

    The residue map is additive, so the images of the basis vectors fix it.
    """
    n = field.n
    return tuple(
        residue_mod_prime(field, prime, [1 if j == i else 0 for j in range(n)])
        for i in range(n)
    )
