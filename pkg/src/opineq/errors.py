"""Exception taxonomy shared across the package."""

from __future__ import annotations

__all__ = [
    "OpineqError",
    "NotHermitian",
    "SpectrumOutOfInterval",
    "DomainViolation",
    "DimensionMismatch",
    "IntervalMismatch",
    "NormalizationViolation",
    "NotUnitState",
    "NonPositiveSpectrum",
    "NotSimilarlyOrdered",
    "ArgumentOrder",
    "UnknownTheorem",
    "ConfigInvalid",
]


class OpineqError(Exception):
    """Base class for every package-specific error."""


class NotHermitian(OpineqError):
    """Matrix deviates from Hermitian symmetry beyond tolerance."""


class SpectrumOutOfInterval(OpineqError):
    """An eigenvalue lies outside the declared spectral interval by more than the slack."""


class DomainViolation(OpineqError):
    """A scalar function was evaluated outside its domain."""


class DimensionMismatch(OpineqError):
    """Operator and state dimensions disagree."""


class IntervalMismatch(OpineqError):
    """Operators expected to share a spectral interval do not."""


class NormalizationViolation(OpineqError):
    """A state collection does not satisfy the required normalization."""


class NotUnitState(OpineqError):
    """A unit-norm state was required."""


class NonPositiveSpectrum(OpineqError):
    """The operation needs a strictly positive spectral interval."""


class NotSimilarlyOrdered(OpineqError):
    """Tuples fail the similarly-ordered hypothesis; the message carries a witness pair."""


class ArgumentOrder(OpineqError):
    """Ordered arguments were passed in the wrong order."""


class UnknownTheorem(OpineqError):
    """No inequality is registered under the requested id."""


class ConfigInvalid(OpineqError):
    """A configuration value or input document is malformed."""
