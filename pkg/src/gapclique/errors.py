"""Exception hierarchy shared by every module of the package."""


class GapCliqueError(Exception):
    """Base class for all errors raised by this package."""


class InversionOfZero(GapCliqueError, ZeroDivisionError):
    pass


class DimensionError(GapCliqueError, ValueError):
    pass


class DuplicateNode(GapCliqueError, ValueError):
    pass


class SingularSystem(GapCliqueError, ValueError):
    pass


class ShapeError(GapCliqueError, ValueError):
    pass


class InvalidTarget(GapCliqueError, ValueError):
    pass


class ParameterError(GapCliqueError, ValueError):
    pass


class ConstructionFailed(GapCliqueError, RuntimeError):
    pass


class GraphFormatError(GapCliqueError, ValueError):
    pass


class FormatViolation(GraphFormatError):
    """A graph has an edge inside one of its parts."""


class ParseError(GapCliqueError, ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class BudgetExceeded(GapCliqueError, RuntimeError):
    """An exhaustive computation would exceed its configured budget.

    ``best`` optionally carries the best partial result found so far
    (for example a clique lower bound).
    """

    def __init__(self, message, needed=None, budget=None, best=None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget
        self.best = best
