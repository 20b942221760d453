"""1-level LDPC lattices over totally real monogenic fields.

All vectors are rows: a lattice point is x = u . M_C. Components are
interleaved per code symbol, block i holding sigma_1(x_i) ... sigma_n(x_i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Any, Dict, Optional, Sequence

import numpy as np
from loguru import logger

from ..common.errors import ArithmeticOverflow, ConstructionError, InvalidInput
from ..ldpc.matrix import SparseBinaryMatrix
from ..ldpc.systematic import SystematicCode, encode_bits
from ..numfield.field import RealNumberField
from ..numfield.primes import PrimeIdealAbove2, residue_map_vector
from .kron import kron_identity_apply, kron_identity_solve, split_blocks

DISC_MAX_BITS = 512
COORD_TOLERANCE = 1e-6
DET_LOG_TOLERANCE = 1e-6

# Largest nN for which the determinant is checked on the dense generator
DENSE_CHECK_LIMIT = 2048


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """Lattice sigma^N(Gamma_C) with generator M_C and parity check H (x) I_n"""

    field: RealNumberField
    prime: PrimeIdealAbove2
    code: SystematicCode
    H_lat: SparseBinaryMatrix
    descriptor: Dict[str, Any] = dataclass_field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def N(self) -> int:
        return self.code.N

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def dim(self) -> int:
        return self.n * self.N

    @cached_property
    def M_C(self) -> np.ndarray:
        """Dense generator [[I_k (x) M, A (x) M], [0, I_{N-k} (x) DM]]."""
        n, N, k = self.n, self.N, self.k
        M = self.field.embed_M
        DM = self.prime.embed_DM
        gen = np.zeros((n * N, n * N))
        gen[: n * k, :] = np.kron(self.code.generator().astype(float), M)
        gen[n * k :, n * k :] = np.kron(np.eye(N - k), DM)
        gen.setflags(write=False)
        return gen

    def __repr__(self) -> str:
        return f"LatticeSpec(n={self.n}, N={self.N}, k={self.k}, d_K={self.field.disc_dK})"


@dataclass(frozen=True, eq=False)
class LatticePoint:
    x: np.ndarray
    c: np.ndarray
    z: np.ndarray


def expected_log_det(field: RealNumberField, N: int, k: int) -> float:
    """Natural log of |det M_C| = d_K^{N/2} 2^{N-k}."""
    return 0.5 * N * math.log(abs(field.disc_dK)) + (N - k) * math.log(2.0)


def build_spec(
    field: RealNumberField,
    prime: PrimeIdealAbove2,
    code: SystematicCode,
    descriptor: Optional[Dict[str, Any]] = None,
) -> LatticeSpec:
    """Assemble the lattice and validate its determinant identity."""
    if prime.residue_degree != 1:
        raise InvalidInput(f"Prime must have residue degree 1, got {prime.residue_degree}")
    if prime.n != field.n:
        raise InvalidInput("Prime and field degrees differ")

    spec = LatticeSpec(
        field=field,
        prime=prime,
        code=code,
        H_lat=code.H.kron_identity(field.n),
        descriptor=descriptor or {},
    )

    expected = expected_log_det(field, code.N, code.k)
    if spec.dim <= DENSE_CHECK_LIMIT:
        sign, measured = np.linalg.slogdet(spec.M_C)
    else:
        # block triangular: det is the product of the diagonal blocks
        sign_m, log_m = np.linalg.slogdet(field.embed_M)
        sign_p, log_p = np.linalg.slogdet(prime.embed_DM)
        sign = sign_m * sign_p
        measured = code.k * log_m + (code.N - code.k) * log_p
    if sign == 0 or abs(measured - expected) > DET_LOG_TOLERANCE:
        raise ConstructionError(
            f"log|det M_C| = {measured:.12g} but the discriminant formula gives "
            f"{expected:.12g}"
        )
    logger.debug(f"Built {spec!r}")
    return spec


def disc_gamma(spec: LatticeSpec) -> int:
    """Exact discriminant d_K^N 2^{2(N-k)}."""
    value = spec.field.disc_dK**spec.N * 4 ** (spec.N - spec.k)
    if value.bit_length() > DISC_MAX_BITS:
        raise ArithmeticOverflow(
            f"Discriminant needs {value.bit_length()} bits (limit {DISC_MAX_BITS})"
        )
    return value


def log_det_scaled(spec: LatticeSpec) -> float:
    """Natural log of |det G| for the scaled lattice 2 Lambda."""
    return spec.dim * math.log(2.0) + expected_log_det(spec.field, spec.N, spec.k)


def det_scaled(spec: LatticeSpec) -> float:
    """|det G| = 2^{nN+N-k} d_K^{N/2}; inf when it exceeds the float range."""
    n, N, k = spec.n, spec.N, spec.k
    d_K = abs(spec.field.disc_dK)
    exact = 2 ** (n * N + N - k) * d_K ** (N // 2)
    try:
        value = float(exact)
    except OverflowError:
        return math.inf
    if N % 2:
        value *= math.sqrt(d_K)
    return value


def encode(
    spec: LatticeSpec, msg: Sequence[int] | np.ndarray, z: Sequence[int] | np.ndarray
) -> LatticePoint:
    """Lattice point whose block i is c_i (1,...,1) + z_i . DM."""
    z_arr = np.asarray(z, dtype=np.int64)
    if z_arr.shape != (spec.dim,):
        raise InvalidInput(f"z must have length {spec.dim}, got shape {z_arr.shape}")
    c = encode_bits(spec.code, msg)
    x = np.repeat(c.astype(float), spec.n) + kron_identity_apply(spec.prime.embed_DM, z_arr)
    return LatticePoint(x=x, c=c, z=z_arr)


def integral_coords(spec: LatticeSpec, x: np.ndarray) -> Optional[np.ndarray]:
    """Per-block integral-basis coordinates of x, or None if any is not integral."""
    values = np.asarray(x, dtype=float)
    if values.shape != (spec.dim,):
        raise InvalidInput(f"x must have length {spec.dim}, got shape {values.shape}")
    coords = split_blocks(kron_identity_solve(spec.field.embed_M, values), spec.n)
    rounded = np.rint(coords)
    if np.any(np.abs(coords - rounded) > COORD_TOLERANCE):
        return None
    return rounded.astype(np.int64)


def membership(spec: LatticeSpec, x: Sequence[float] | np.ndarray) -> bool:
    """True iff x lies in the lattice: integral coordinates and every parity
    check sum reduces to 0 modulo the prime."""
    coords = integral_coords(spec, np.asarray(x, dtype=float))
    if coords is None:
        return False
    checks, variables = spec.code.H.edges
    sums = np.zeros((spec.code.H.n_rows, spec.n), dtype=np.int64)
    np.add.at(sums, checks, coords[variables])
    residues = sums @ np.array(residue_map_vector(spec.field, spec.prime), dtype=np.int64)
    return not np.any(residues % 2)
