"""Exception types raised by cyclichiggs.

Every error derives from CyclicHiggsError. The command-line front end maps
them onto exit codes: VerificationError -> 1, InputError -> 2,
NumericError (including ConvergenceError) -> 3.
"""

from typing import Any, Optional


class CyclicHiggsError(Exception):
    """Base class for all cyclichiggs errors."""


class InputError(CyclicHiggsError, ValueError):
    """Invalid user input: type/rank, subset, grid, problem document."""


class NumericError(CyclicHiggsError, ArithmeticError):
    """A floating point computation failed or became non-finite."""


class ConvergenceError(NumericError):
    """Newton iteration stopped without reaching the tolerance.

    Attributes:
        solution: the best iterate found, with ``converged=False`` and the
            full residual history.
    """

    def __init__(self, message: str, solution: Optional[Any] = None):
        super().__init__(message)
        self.solution = solution


class VerificationError(CyclicHiggsError, AssertionError):
    """An invariant suite found a violation.

    Attributes:
        report: the report dict of the failing suite.
    """

    def __init__(self, message: str, report: Optional[dict] = None):
        super().__init__(message)
        self.report = report or {}
