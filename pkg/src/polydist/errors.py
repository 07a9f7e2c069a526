"""Exception and warning types raised across the package."""


class PolytopeError(Exception):
    """Base class for all errors raised by polydist."""


class InputError(PolytopeError, ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class BudgetExceeded(PolytopeError):
    """A configurable work cap was hit (CLI exit code 3)."""


class TimeBudgetExceeded(BudgetExceeded):
    pass


class InternalInvariantError(PolytopeError):
    """A construction produced something its own guarantees rule out (CLI exit code 4)."""


class AffinelyDependent(InputError):
    pass


class DimensionTooSmall(InputError):
    pass


class NotSimple(InputError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAVertex(InputError):
    pass


class BasisNotPresent(InputError):
    pass


class OddSum(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class RTooSmall(InputError):
    pass


class BallNotInterior(InputError):
    pass


class Unreachable(InternalInvariantError):
    pass


class RecordInconsistent(InternalInvariantError):
    pass


class LayeringFailed(InternalInvariantError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class GreedyStuck(InternalInvariantError):
    pass


class NonUniqueMax(InternalInvariantError):
    pass


class TiedObjectiveEdge(UserWarning):
    """An edge joins two vertices with equal objective value; it is skipped."""


class GreedyTie(UserWarning):
    """Two neighbours are equally close to the apex."""
