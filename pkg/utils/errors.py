"""Exception hierarchy shared by the physics library and the CLI.

Every class carries the process exit code main.py reports when it escapes a command.
"""
from typing import Optional


class SlitSimError(Exception):
    """Base class for all slitsim errors"""
    exit_code = 1


class DomainError(SlitSimError, ValueError):
    """A parameter lies outside the domain of an operation"""
    exit_code = 2


class ApproximationDomainError(DomainError):
    """A large-L closed form was requested for a small slit separation"""


class UnsupportedInputError(DomainError):
    """Input has a shape the closed-form operation does not handle"""


class GridTooSmallError(DomainError):
    """Grid does not contain the wavefunction"""


class UsageError(SlitSimError):
    """Command-line misuse"""
    exit_code = 2


class NumericError(SlitSimError, ArithmeticError):
    """A numerical routine failed to reach its tolerance"""
    exit_code = 3


class QuadratureError(NumericError):
    """Adaptive quadrature did not converge; carries the best estimate"""
    def __init__(self, message: str, estimate: float, error_estimate: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class OutputError(SlitSimError, OSError):
    """Output folder or file could not be written"""
    exit_code = 4

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path
