"""Exception types shared across the package."""


class LowDefaultError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LowDefaultError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(LowDefaultError, ValueError):
    """Input data violates a model invariant (e.g. defaults >= pool size)."""


class ParseError(ValidationError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownDatasetError(LowDefaultError, KeyError):
    """Requested built-in dataset does not exist."""


class RootBracketError(LowDefaultError, ArithmeticError):
    """A root search could not bracket a sign change."""


class DegenerateGridError(LowDefaultError, ArithmeticError):
    """Every integrand value on the outer grid underflowed to zero."""


class SampleMismatchError(LowDefaultError, ValueError):
    """A factor sample does not match the data it is combined with."""
