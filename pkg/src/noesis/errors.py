"""Exception hierarchy shared by all noesis modules."""

from __future__ import annotations


class NoesisError(Exception):
    """Base class for every error raised by this package."""


class ParseError(NoesisError):
    """Malformed input document. Carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(NoesisError):
    """Structurally well-formed input that violates a domain invariant."""


class DuplicateName(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class UnknownAttribute(ValidationError):
    pass


class UnknownObject(ValidationError):
    pass


class GranuleRegression(ValidationError):
    pass


class UnknownGranule(ValidationError):
    pass


class EmptyBasis(ValidationError):
    pass


class NoAttributes(ValidationError):
    pass


class EmptyContext(ValidationError):
    pass


class MissingTruth(ValidationError):
    pass


class DuplicateInstance(ValidationError):
    pass


class CxtLossy(NoesisError):
    """Context cannot be written to Burmeister text without losing information."""


class ZeroState(NoesisError):
    pass


class BasisMismatch(NoesisError):
    pass


class ZeroProbability(NoesisError):
    pass


class ProtocolViolation(NoesisError):
    pass


class NotACounterexample(NoesisError):
    pass


class OracleUnavailable(NoesisError):
    pass
