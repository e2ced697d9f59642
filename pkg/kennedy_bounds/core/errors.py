"""Exception hierarchy shared by the core modules and the command-line front end."""

from __future__ import annotations


class KennedyBoundsError(Exception):
    """Base class for every error raised by kennedy_bounds."""


class DomainError(KennedyBoundsError, ValueError):
    """An argument lies outside the domain of the formula being evaluated."""


class DimensionMismatchError(KennedyBoundsError, ValueError):
    """Two Fock-space objects with different truncation dimensions were combined."""


class NumericFailure(KennedyBoundsError):
    """A numerical procedure could not deliver a trustworthy result."""


class TruncationError(NumericFailure):
    """The truncated Fock basis is too small for the requested state or operator."""

    def __init__(self, message: str, deficit: float | None = None) -> None:
        super().__init__(message)
        self.deficit = deficit


class NoCrossingError(NumericFailure):
    """The detection probability never reaches 1/2 on the search interval."""


class DegenerateThresholdError(NumericFailure):
    """The detection probability is already >= 1/2 at the smallest searched perturbation."""


class RowSchemaError(KennedyBoundsError):
    """Output rows do not match the column schema of their command."""
