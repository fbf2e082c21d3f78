"""Exception hierarchy shared across the library."""


class TsvarError(Exception):
    """Base class for all library errors."""


class ConstructionError(TsvarError):
    """Invalid time-scale specification (degenerate bounds, bad node counts, overlaps)."""


class DomainError(TsvarError):
    """A point or value lies outside the domain where an operation is defined."""


class PreconditionError(TsvarError):
    """A theorem hypothesis or operation precondition is not met."""


class ParameterError(TsvarError):
    """An excluded or nonsensical parameter value (e.g. a power exponent of 0 or 1)."""


class ClassificationError(TsvarError):
    """Convexity could not be decided: the second derivative changes sign on the range."""


class FeasibilityError(TsvarError):
    """The strict feasibility condition of the x*ln(x) problem fails at some point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class AdmissibilityError(TsvarError):
    """A candidate trajectory violates an admissibility condition."""

    def __init__(self, message, point=None, condition=None):
        super().__init__(message)
        self.point = point
        self.condition = condition


class DegenerateProblemError(TsvarError):
    """The functional is constant (exponent 0 or 1); carries that constant value."""

    def __init__(self, message, constant_value):
        super().__init__(message)
        self.constant_value = constant_value


class BudgetError(TsvarError):
    """Exhaustive enumeration would exceed the candidate budget."""


class SchemaError(TsvarError):
    """A problem file does not validate against the expected schema."""
