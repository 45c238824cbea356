"""Exception hierarchy shared by all edft modules."""


class EDFTError(Exception):
    """Base class for every error raised by this package."""


class SequenceError(EDFTError, ValueError):
    """Malformed input sequence."""


class EmptySequence(SequenceError):
    pass


class InfValue(SequenceError):
    pass


class NonMonotonicTimes(SequenceError):
    pass


class MonotonicityViolated(NonMonotonicTimes):
    pass


class TooFewNonzeroWeights(EDFTError, ValueError):
    pass


class SingularOrIndefinite(EDFTError, ArithmeticError):
    """A correlation matrix is singular, indefinite or too ill-conditioned."""


class RecursionBreakdown(SingularOrIndefinite):
    """Levinson-Durbin prediction error became non-positive."""


class NonPositiveDiagonal(SingularOrIndefinite):
    pass


class SingularAutocorrelation(SingularOrIndefinite):
    pass


class SingularQ(SingularOrIndefinite):
    pass
