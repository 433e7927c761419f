"""Exception types shared across the package."""


class QuasiMedianError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QuasiMedianError):
    """Valid input that violates a precondition or exceeds a size cap."""


class SpecParseError(QuasiMedianError):
    """Malformed spec file, word expression or table file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class InvariantError(QuasiMedianError):
    """Two independent computations that must agree did not."""
