"""Typed errors shared across the package."""

from __future__ import annotations


class SemiopError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(SemiopError):
    """Input expected to be Hermitian deviates beyond tolerance."""


class NegativeSpectrum(SemiopError):
    """Input expected to be positive semidefinite has a genuinely negative eigenvalue."""


class DimensionMismatch(SemiopError):
    """Operand shapes are inconsistent with each other or with the metric."""


class NotAMember(SemiopError):
    """Operator does not admit a deformed adjoint for the given metric.

    In finite dimension this means the operator maps some kernel vector of
    the metric outside the kernel, so the deformed seminorm is unbounded.
    """


class BadParams(SemiopError):
    """Exponent bundle violates a constraint required by the selected bound."""


class BadConfig(SemiopError):
    """Generator configuration is out of range."""


class BadFamily(SemiopError):
    """Unknown operand generator family."""


class GenerationFailed(SemiopError):
    """A generated draw failed its own defining residual check."""


class UnknownTheorem(SemiopError):
    """Identifier not present in the bound registry."""


class MatrixFormatError(SemiopError):
    """Matrix file does not conform to the shared interchange format."""
