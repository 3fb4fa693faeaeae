"""Exception types raised by cevchart."""


class CevError(Exception):
    """Base class for all cevchart errors."""


class DomainError(CevError, ValueError):
    """An argument lies outside the domain of a function."""


class DataError(CevError):
    """The data cannot support the requested computation."""


class DegenerateSampleError(DataError):
    """Sample has zero spread (all censored or constant)."""


class AllCensoredError(DegenerateSampleError):
    """Every observation is censored, so no information about spread remains."""


class InsufficientDataError(DataError):
    pass


class ParseError(DataError):
    """Malformed input file. Carries the 1-based row and column when known."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        where = ""
        if row is not None:
            where = f"row {row}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ConfigurationError(CevError, ValueError):
    """Invalid option or option combination."""
