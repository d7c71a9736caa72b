"""
Errors module for Polydist

Every failure the library can report is a PolytopeError. The three families
map directly onto CLI exit codes: input errors (2), exhausted budgets (3) and
violated internal invariants (4).
"""

from typing import Any, Dict


class PolytopeError(Exception):
    """Base class for all library errors"""

    exit_code = 4

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details: Dict[str, Any] = details


class InputError(PolytopeError):
    """The caller handed us something we cannot work with"""

    exit_code = 2


class BudgetError(PolytopeError):
    """A configured size or time budget would be exceeded"""

    exit_code = 3


class InvariantViolation(PolytopeError):
    """A construction produced a result that breaks a proven property"""

    exit_code = 4


# Input errors

class MalformedInput(InputError):
    pass


class AffinelyDependent(InputError):
    pass


class DimensionTooSmall(InputError):
    pass


class NotSimple(InputError):
    """Raised with a degenerate vertex witness in details['witness']"""


class NotAVertex(InputError):
    pass


class UnboundedEdge(InputError):
    pass


class BasisNotPresent(InputError):
    pass


class InvalidOrder(InputError):
    pass


class SameVertex(InputError):
    pass


class OddSum(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class BallNotInterior(InputError):
    pass


class RTooSmall(InputError):
    pass


# Budget errors

class TimeBudgetExceeded(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


# Invariant violations

class Unreachable(InvariantViolation):
    pass


class RecordInconsistent(InvariantViolation):
    pass


class LayeringFailed(InvariantViolation):
    pass


class GreedyStuck(InvariantViolation):
    pass


class NonUniqueMax(InvariantViolation):
    pass


class FormulaMismatch(InvariantViolation):
    pass


# Warnings

class TiedObjectiveEdge(UserWarning):
    """An edge whose endpoints have equal objective value was dropped"""


class GreedyTie(UserWarning):
    """Two neighbours were equally close to the apex during a greedy step"""
