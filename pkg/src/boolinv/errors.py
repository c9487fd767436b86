"""Exception hierarchy shared by every module."""


class BIMError(Exception):
    """Base class for all library errors."""


class DomainError(BIMError, ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(BIMError, ValueError):
    """A documented precondition of an operation does not hold."""


class ConsistencyError(BIMError, RuntimeError):
    """An internal cross-check failed; this signals a bug or corrupt input."""


class ResourceLimitError(BIMError):
    """A configured size bound would be exceeded."""


class ParseError(BIMError, ValueError):
    """A text literal could not be parsed.

    ``line`` and ``column`` are 1-based; ``column`` doubles as the character
    offset for single-line literals.
    """

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class TableFormatError(ParseError):
    """A multiplication/group/MV table is malformed (wrong sizes, bad tokens)."""


class ValidationError(BIMError):
    """Candidate tables fail the Boolean inverse monoid axioms."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))
