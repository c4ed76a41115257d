"""Exception hierarchy.

Exit codes used by the command line front end hang off these classes, so
keep the split between configuration, data and numerical failures intact.
"""

from __future__ import annotations


class IcecError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(IcecError, ValueError):
    """Bad configuration: unknown unit tag, malformed scenario, bad option."""


class ScenarioSchemaError(ConfigurationError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DomainError(IcecError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularWavenumberError(DomainError):
    """Zero electron energy where a 1/k factor appears."""


class ChannelClosedError(DomainError):
    """Incident energy below the ICEC threshold for a given neighbor."""


# -- data validation -------------------------------------------------------


class DataValidationError(IcecError, ValueError):
    """Input table or metadata failed validation."""


class CurveFormatError(DataValidationError):
    pass


class MissingParameterizationError(CurveFormatError):
    pass


class TooFewPointsError(CurveFormatError):
    pass


class MonotonicityError(CurveFormatError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(message)


class NegativeSigmaError(CurveFormatError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(message)


class MissingFieldError(DataValidationError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message)


class DanglingReferenceError(DataValidationError):
    def __init__(self, message: str, species: str | None = None, path: str | None = None):
        self.species = species
        self.path = path
        super().__init__(message)


class OutOfRangeError(DataValidationError):
    """Requested energy lies outside the tabulated (and extended) range.

    ``interval`` holds the admissible closed interval in hartree.
    """

    def __init__(self, message: str, interval: tuple[float, float], energy: float):
        self.interval = interval
        self.energy = energy
        super().__init__(message)


class ScanError(DataValidationError):
    """A data error raised while scanning; carries the failing energy."""

    def __init__(self, message: str, eps: float, neighbor_index: int | None = None):
        self.eps = eps
        self.neighbor_index = neighbor_index
        super().__init__(message)


# -- numerics ---------------------------------------------------------------


class ConvergenceError(IcecError, ArithmeticError):
    def __init__(self, message: str, estimate: float, error_estimate: float):
        self.estimate = estimate
        self.error_estimate = error_estimate
        super().__init__(message)


class FactorizationMismatch(IcecError, AssertionError):
    def __init__(self, message: str, measured: float, expected: float):
        self.measured = measured
        self.expected = expected
        super().__init__(message)
