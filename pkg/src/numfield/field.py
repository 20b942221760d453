"""Totally real monogenic number fields: construction, embeddings, arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Sequence, Tuple

import numpy as np
import sympy
from loguru import logger

from ..common.errors import (
    ArithmeticOverflow,
    InvalidInput,
    NotSeparable,
    NotTotallyReal,
    UnusableField,
)

MAX_DEGREE = 5
MAX_COEFF = 10**6
INT64_MAX = 2**63 - 1

_X = sympy.Symbol("x")

# Newton polishing steps applied to companion-matrix eigenvalues
_NEWTON_STEPS = 3


@dataclass(frozen=True)
class IntegerPoly:
    """Monic integer polynomial, coefficients lowest degree first"""

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise InvalidInput("Polynomial must have degree at least 1")
        if coeffs[-1] != 1:
            raise InvalidInput(f"Polynomial must be monic, got {coeffs}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x: float) -> float:
        return float(np.polyval(self.coeffs[::-1], x))

    def derivative_at(self, x: float) -> float:
        return float(np.polyval(np.polyder(np.array(self.coeffs[::-1], dtype=float)), x))

    def as_expr(self) -> sympy.Expr:
        return sum(c * _X**i for i, c in enumerate(self.coeffs))

    def discriminant(self) -> int:
        if self.degree == 1:
            return 1
        return int(sympy.discriminant(self.as_expr(), _X))

    def __str__(self) -> str:
        return str(self.as_expr())


@dataclass(frozen=True, eq=False)
class RealNumberField:
    """Degree-n totally real field with an integral power basis.

    Attributes:
        minpoly: defining polynomial of the power generator theta
        roots: conjugates of theta, ascending; fixes the embedding order
        basis_coords: integral basis in power-basis coordinates
        embed_M: M[i][j] = sigma_j(omega_i)
        disc_dK: field discriminant
        descriptor: JSON-ready description used for provenance
    """

    minpoly: IntegerPoly
    roots: Tuple[float, ...]
    basis_coords: Tuple[Tuple[Fraction, ...], ...]
    embed_M: np.ndarray
    disc_dK: int
    descriptor: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.minpoly.degree

    @cached_property
    def theta_coords(self) -> Tuple[int, ...]:
        """Power-basis coordinates of theta itself."""
        return theta_times(self, (1,) + (0,) * (self.n - 1))

    def embed(self, coords: Sequence[int] | np.ndarray) -> np.ndarray:
        """Canonical embedding of elements given in integral-basis coordinates (one per row)."""
        return np.asarray(coords, dtype=float) @ self.embed_M

    def power_basis_integral(self) -> bool:
        n = self.n
        return all(
            self.basis_coords[i][j] == (1 if i == j else 0)
            for i in range(n)
            for j in range(n)
        )

    def __repr__(self) -> str:
        return f"RealNumberField({self.minpoly}, d_K={self.disc_dK})"


def _check_int64(values: Sequence[int]) -> None:
    for v in values:
        if abs(v) > INT64_MAX:
            raise ArithmeticOverflow(f"Intermediate value {v} exceeds 64-bit range")


def theta_times(field_: RealNumberField, coords: Sequence[int]) -> Tuple[int, ...]:
    """Multiply an element by theta via the companion matrix of the minpoly."""
    a = field_.minpoly.coeffs
    n = field_.n
    top = int(coords[n - 1])
    shifted = [0] + [int(c) for c in coords[: n - 1]]
    result = [shifted[i] - top * a[i] for i in range(n)]
    _check_int64(result)
    return tuple(result)


def mul_in_OK(
    field_: RealNumberField, a: Sequence[int], b: Sequence[int]
) -> Tuple[int, ...]:
    """Exact product of two power-basis coordinate vectors, reduced mod minpoly."""
    n = field_.n
    if len(a) != n or len(b) != n:
        raise InvalidInput(f"Coordinate vectors must have length {n}")
    for value in (*a, *b):
        if int(value) != value:
            raise InvalidInput(f"Coordinates must be integers, got {value}")
    _check_int64([int(v) for v in (*a, *b)])

    power = tuple(int(v) for v in a)
    result = [0] * n
    for j, b_j in enumerate(b):
        if j > 0:
            power = theta_times(field_, power)
        if b_j:
            result = [r + int(b_j) * p for r, p in zip(result, power)]
            _check_int64(result)
    return tuple(result)


def _real_roots(poly: IntegerPoly) -> Tuple[float, ...]:
    """Ascending real roots via companion eigenvalues plus Newton polishing."""
    n = poly.degree
    companion = np.zeros((n, n))
    if n > 1:
        companion[1:, :-1] = np.eye(n - 1)
    companion[:, -1] = [-c for c in poly.coeffs[:-1]]
    eigenvalues = np.linalg.eigvals(companion)

    scale = 1.0 + np.abs(eigenvalues)
    if np.any(np.abs(eigenvalues.imag) > 1e-7 * scale):
        raise NotTotallyReal(f"{poly} has non-real roots")

    roots = []
    for r in np.sort(eigenvalues.real):
        x = float(r)
        for _ in range(_NEWTON_STEPS):
            slope = poly.derivative_at(x)
            if slope == 0.0:
                break
            x -= poly.evaluate(x) / slope
        roots.append(x)
    return tuple(sorted(roots))


def build_from_poly(
    poly: IntegerPoly | Sequence[int], descriptor: Dict[str, Any] | None = None
) -> RealNumberField:
    """Build the field of a monic polynomial whose power basis is integral.

    Monogenicity with power basis = integral basis is the caller's assertion;
    it is not verified here.
    """
    if not isinstance(poly, IntegerPoly):
        poly = IntegerPoly(tuple(poly))
    n = poly.degree
    if n > MAX_DEGREE:
        raise InvalidInput(f"Degree {n} exceeds the supported maximum {MAX_DEGREE}")
    if any(abs(c) > MAX_COEFF for c in poly.coeffs):
        raise InvalidInput(f"Coefficients of {poly} exceed {MAX_COEFF}")

    poly_disc = poly.discriminant()
    if poly_disc == 0:
        raise NotSeparable(f"{poly} has a repeated root")

    roots = _real_roots(poly)
    if n > 1 and not sympy.Poly(poly.as_expr(), _X).is_irreducible:
        raise InvalidInput(f"{poly} is reducible over the rationals")

    basis = tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    basis_det = sympy.Matrix(n, n, lambda i, j: sympy.Rational(basis[i][j])).det()
    disc = sympy.Integer(poly_disc) * basis_det**2
    if not disc.is_integer:
        raise InvalidInput(f"Basis of {poly} yields non-integral discriminant")

    vandermonde = np.array([[r**i for r in roots] for i in range(n)])
    embed = np.array([[float(c) for c in row] for row in basis]) @ vandermonde
    embed.setflags(write=False)

    numeric = float(np.linalg.det(embed)) ** 2
    if abs(numeric - abs(int(disc))) > 1e-9 * abs(int(disc)) + 1e-9:
        logger.warning(
            f"det(M)^2 = {numeric:.6g} disagrees with discriminant {int(disc)}"
        )

    built = RealNumberField(
        minpoly=poly,
        roots=roots,
        basis_coords=basis,
        embed_M=embed,
        disc_dK=int(disc),
        descriptor=descriptor or {"kind": "poly", "coeffs": list(poly.coeffs)},
    )
    logger.debug(f"Built {built!r} with roots {roots}")
    return built


def build_quadratic(m: int) -> RealNumberField:
    """Real quadratic field Q(sqrt(m)) generated by its ring-of-integers generator."""
    if m <= 1:
        raise InvalidInput(f"m must exceed 1, got {m}")
    if m > MAX_COEFF:
        raise InvalidInput(f"m={m} exceeds {MAX_COEFF}")
    if any(exp > 1 for exp in sympy.factorint(m).values()):
        raise InvalidInput(f"m={m} is not square-free")

    descriptor = {"kind": "quadratic", "m": m}
    if m % 4 in (2, 3):
        return build_from_poly(IntegerPoly((-m, 0, 1)), descriptor)
    if m % 8 == 1:
        return build_from_poly(IntegerPoly((-(m - 1) // 4, -1, 1)), descriptor)
    raise UnusableField(
        f"Q(sqrt({m})) is unusable: m = 5 (mod 8) makes (m-1)/4 odd, so 2 is "
        "inert and no prime above 2 has residue field F2"
    )


def build_cubic_example() -> RealNumberField:
    """The field of x^3 - x^2 - 3x + 1 (d_K = 148)."""
    return build_from_poly(IntegerPoly((1, -3, -1, 1)), {"kind": "cubic-example"})


# Biquadratic fields x^4 - 2a x^2 + 1 whose power basis is integral and whose
# minpoly reduces to (x+1)^4 mod 2
CATALOG: Dict[str, Tuple[int, ...]] = {
    "biquadratic-2304": (1, 0, -4, 0, 1),
    "biquadratic-57600": (1, 0, -8, 0, 1),
    "biquadratic-313600": (1, 0, -12, 0, 1),
}


def build_catalog(name: str) -> RealNumberField:
    """Look up a validated quartic field by name."""
    try:
        coeffs = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise InvalidInput(f"Unknown catalog field '{name}' (known: {known})")
    return build_from_poly(IntegerPoly(coeffs), {"kind": "catalog", "name": name})


def build_field(descriptor: Any) -> RealNumberField:
    """Build a field from a descriptor model or its JSON dict."""
    if hasattr(descriptor, "model_dump"):
        descriptor = descriptor.model_dump()
    kind = descriptor.get("kind")
    if kind == "quadratic":
        return build_quadratic(int(descriptor["m"]))
    if kind == "cubic-example":
        return build_cubic_example()
    if kind == "poly":
        return build_from_poly(IntegerPoly(tuple(descriptor["coeffs"])))
    if kind == "catalog":
        return build_catalog(str(descriptor["name"]))
    raise InvalidInput(f"Unknown field kind: {kind!r}")


def monogenic_disc_check(poly: IntegerPoly | Sequence[int]) -> int:
    """Discriminant of x^3 + ax + b or x^4 + ax + b by the closed forms."""
    if not isinstance(poly, IntegerPoly):
        poly = IntegerPoly(tuple(poly))
    c = poly.coeffs
    if poly.degree == 3 and c[2] == 0:
        a, b = c[1], c[0]
        return -4 * a**3 - 27 * b**2
    if poly.degree == 4 and c[2] == 0 and c[3] == 0:
        a, b = c[1], c[0]
        return -27 * a**4 + 256 * b**3
    raise InvalidInput(f"{poly} is not of shape x^3+ax+b or x^4+ax+b")
