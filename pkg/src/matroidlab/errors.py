"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for every error raised by matroidlab."""


class ZeroInverse(WorkbenchError, ZeroDivisionError):
    pass


class NotSquare(WorkbenchError, ValueError):
    pass


class TooLarge(WorkbenchError, ValueError):
    """An enumeration or factorial-cost guard was exceeded."""


class DimensionMismatch(WorkbenchError, ValueError):
    pass


class LoopDetected(WorkbenchError, ValueError):
    pass


class InvalidLines(WorkbenchError, ValueError):
    pass


class AxiomViolation(WorkbenchError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BadParams(WorkbenchError, ValueError):
    pass


class UnknownName(WorkbenchError, KeyError):
    pass


class NotAFlat(WorkbenchError, ValueError):
    pass


class FullFlat(WorkbenchError, ValueError):
    pass


class WeightedDegrees(WorkbenchError, ValueError):
    pass


class WeightNotPositive(WorkbenchError, ValueError):
    pass


class BadRanks(WorkbenchError, ValueError):
    pass


class RangeViolation(WorkbenchError, ValueError):
    """(r, r') lies outside r + r' <= rank(M) and exploratory mode is off."""


class TheoremAlarm(WorkbenchError, RuntimeError):
    """A check that the theorems guarantee came out false.

    Under correct arithmetic this cannot happen, so it signals a bug.
    ``payload`` carries whatever diagnostic data the raiser had at hand.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class InvalidComplex(WorkbenchError, ValueError):
    pass


class SchemaError(WorkbenchError, ValueError):
    """Malformed JSON input."""


class SizeMismatch(DimensionMismatch):
    """A cochain has the wrong number of entries for its complex."""
