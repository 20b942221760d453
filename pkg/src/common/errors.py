"""Exception hierarchy shared by every divlat module."""

from __future__ import annotations


class DivlatError(Exception):
    """Base class for all divlat failures."""


class InvalidInput(DivlatError, ValueError):
    """Raised when an argument violates an operation's precondition."""


class UnusableField(DivlatError):
    """Raised when a field has no prime above 2 with residue field F2."""


class NotTotallyReal(DivlatError):
    """Raised when a defining polynomial has non-real roots."""


class NotSeparable(DivlatError):
    """Raised when a defining polynomial has a repeated root."""


class NoLinearFactor(DivlatError):
    """Raised when the requested linear factor does not divide f mod 2."""


class ArithmeticOverflow(DivlatError, OverflowError):
    """Raised when exact integer arithmetic leaves its supported range."""


class MalformedAlist(DivlatError, ValueError):
    """Raised when alist text is inconsistent with its own header."""


class ConstructionError(DivlatError):
    """Raised when a built lattice fails its determinant identity."""


class SingularBasis(DivlatError):
    """Raised when a lattice basis is rank deficient."""


class Unsupported(DivlatError):
    """Raised when a request exceeds the supported dimension."""


class AllBlocksFaded(DivlatError):
    """Raised when every fading block of a frame is in deep fade."""


class InsufficientData(DivlatError):
    """Raised when a measurement lacks enough error events."""
