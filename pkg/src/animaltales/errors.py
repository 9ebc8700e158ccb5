"""Exception types shared across the package.

Exit-code contract for the CLI: 0 success, 1 validation error, 2 I/O error,
3 internal invariant violation.
"""

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


class ValidationError(ValueError):
    """Bad input data or configuration: malformed records, domain errors."""


class ParseError(ValidationError):
    """Malformed catalogue or lexicon text; carries a line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class ConvergenceError(InvariantError):
    """An iterative numerical routine failed to converge."""


class StageFailure(Exception):
    """Wraps an exception raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


def exit_code_for(exc) -> int:
    if isinstance(exc, StageFailure):
        return exit_code_for(exc.cause)
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, InvariantError):
        return EXIT_INTERNAL
    return EXIT_INTERNAL
