"""Exception types shared across the package."""


class QwalkError(Exception):
    """Base class for all errors raised by qwalk."""


class ParseError(QwalkError, ValueError):
    """Malformed input document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(QwalkError, ValueError):
    """Input is well formed but violates a precondition."""


class NumericalError(QwalkError, ArithmeticError):
    """An iterative routine failed to converge."""


class InconsistencyError(QwalkError, ArithmeticError):
    """A discriminant spectrum lacks eigenvalues that the dimensions force."""
