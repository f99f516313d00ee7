"""Exception hierarchy for the mobility library.

Everything raised on purpose derives from MobilityError, so callers can
catch one type at the boundary.  The subclasses split along the lines the
command line tool needs: bad arguments, bad data, and numerically
meaningless results.
"""

from __future__ import annotations


class MobilityError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParamsError(MobilityError, ValueError):
    """A model parameter or argument is outside its allowed domain."""


class DegenerateGapError(MobilityError, ArithmeticError):
    """The log-income gap is a point mass at zero, so the probability of
    out-earning the parent has no meaningful value."""


class DataError(MobilityError):
    """Base class for problems with observed income data."""


class NonPositiveIncomeError(DataError, ValueError):
    """An income value is zero or negative and cannot be log-transformed.

    ``row`` locates the offending observation: the 1-based file row when
    raised while reading a CSV, the 0-based pair index when raised while
    building a sample from arrays.
    """

    def __init__(self, message: str, *, row: int | None = None):
        super().__init__(message)
        self.row = row


class ZeroVarianceError(DataError, ArithmeticError):
    """A margin of the sample is constant, so slopes and correlations are
    undefined."""


class InsufficientDataError(DataError, ValueError):
    """Fewer observations than the estimator needs."""


class CsvParseError(DataError, ValueError):
    """A CSV cell could not be parsed as a finite number.

    ``row`` is the 1-based file row (header included in the count) and
    ``column`` names or indexes the offending cell.
    """

    def __init__(self, message: str, *, row: int | None = None, column: int | str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class MissingColumnError(DataError, KeyError):
    """A requested column is absent from the file."""

    # KeyError repr-quotes its sole argument, which mangles sentence-style
    # messages; fall back to the plain text.
    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return str(self.args[0]) if self.args else ""
