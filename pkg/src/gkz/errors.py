"""Exception hierarchy shared by all modules."""


class GKZError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(GKZError):
    """A mathematical precondition of an operation does not hold."""


class NotHomogeneous(PreconditionError):
    pass


class RankDeficient(PreconditionError):
    pass


class NonGenericWeight(PreconditionError):
    pass


class NotSimplex(PreconditionError):
    pass


class NoSingleCellWeight(PreconditionError):
    pass


class SpanMismatch(PreconditionError):
    pass


class NotSublattice(PreconditionError):
    pass


class ZeroDenominator(PreconditionError):
    pass


class BudgetExceeded(GKZError):
    """An enumeration hit its configured bound before reaching closure."""


class InternalInconsistency(GKZError):
    """Two independent routes to the same quantity disagree."""
