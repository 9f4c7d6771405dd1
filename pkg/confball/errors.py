"""Exceptions raised by confball.

All of them derive from :class:`ConfballError`, so callers (the command
line interface in particular) can catch every numeric or domain failure
of the package with a single clause.
"""


class ConfballError(Exception):
    """Base class of all errors raised by confball."""


class DomainError(ConfballError, ValueError):
    """An argument lies outside of the domain of an operation."""


class PreconditionError(DomainError):
    """A mathematical precondition of an operation is violated. The
    message names the inequality that does not hold.
    """


class DimensionError(DomainError):
    """Two objects that have to live in the same space don't."""


class ParseError(DomainError):
    """A value in an input file could not be read.

    :param message: Description of the problem.
    :type message: str
    :param row: One-based line number in the file., defaults to None
    :type row: int, optional
    :param column: One-based column number in the file.,
        defaults to None
    :type column: int, optional
    """

    def __init__(self, message: str, row: int = None, column: int = None):
        location = ""
        if row is not None:
            location = f" (row {row}"
            if column is not None:
                location += f", column {column}"
            location += ")"
        super().__init__(message + location)
        self.row = row
        self.column = column


class ConvergenceError(ConfballError, RuntimeError):
    """A series or an iterative solver did not reach its tolerance
    within the allowed budget.
    """


class BracketError(ConvergenceError):
    """No sign change could be found for a root finding problem."""


class EnumerationCapError(ConfballError, ValueError):
    """Enumerating a model family would exceed the configured cap."""
