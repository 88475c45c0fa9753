"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures without a lookup table of its own.
"""


class HreError(Exception):
    """Base class for all errors raised by hrekit."""

    exit_code = 2


class InvalidMatrix(HreError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"invalid comparison matrix: {lines}")


class ProblemError(HreError):
    """Inconsistent unknown/reference partition or bad reference weight."""


class MatrixIncomplete(HreError):
    """A complete matrix was required but some comparisons are missing."""


# Alias used by the consistency indices.
HasMissingEntries = MatrixIncomplete


class NonNegativityViolated(HreError):
    pass


class DimensionMismatch(HreError):
    pass


class NonpositiveEntry(HreError):
    pass


class NotIrreducible(HreError):
    exit_code = 4


Reducible = NotIrreducible


class HasAllMissingRow(NotIrreducible):
    pass


class IsolatedRow(NotIrreducible):
    pass


class NotConsistent(HreError):
    exit_code = 3


class SingularSystem(HreError):
    exit_code = 3

    def __init__(self, message, *, report=None, pivot_floor=None):
        super().__init__(message)
        self.report = report
        self.pivot_floor = pivot_floor


class NonpositiveSolution(HreError):
    exit_code = 3


class ParseError(HreError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{where}")


class SchemaError(HreError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
