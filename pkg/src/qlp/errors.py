"""Exception hierarchy shared by every layer of the library and the CLI."""


class QLPError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class UsageError(QLPError, ValueError):
    """A precondition of an operation was violated by its arguments."""

    exit_code = 2


class FieldMismatchError(UsageError):
    """Operands live over different field descriptors."""


class ArithmeticFailure(QLPError, ArithmeticError):
    """Division by zero and similar arithmetic impossibilities."""

    exit_code = 2


class ResourceError(QLPError):
    """A configured resource guard (degree cap, search budget) tripped."""

    exit_code = 3


class VerificationError(QLPError, AssertionError):
    """A self-check comparing two independent computations failed."""

    exit_code = 1


class ParseError(UsageError):
    """Syntax or semantic error in CLI source text, with a source position."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
