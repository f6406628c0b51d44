"""Exception types raised across the package."""


class SplitRankError(Exception):
    """Base class for all errors raised by splitrank."""


class ZeroVector(SplitRankError, ValueError):
    pass


class RankDeficient(SplitRankError, ValueError):
    pass


class NotPrimitive(SplitRankError, ValueError):
    """The rows do not generate a primitive sublattice.

    ``witness`` is an integral point of the rational span that is not an
    integer combination of the rows.
    """

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"sublattice is not primitive; witness {self.witness}")


class DimensionMismatch(SplitRankError, ValueError):
    pass


class EmptyPolyhedron(SplitRankError, ValueError):
    pass


class InvalidObjective(SplitRankError, ValueError):
    pass


class UnboundedInput(SplitRankError, ValueError):
    pass


class NonIntegralOffset(SplitRankError, ArithmeticError):
    pass


class UnboundedDirectionRange(SplitRankError, ValueError):
    def __init__(self, direction, side):
        self.direction = tuple(direction)
        self.side = side
        super().__init__(
            f"direction {self.direction} is unbounded {'below' if side == 'min' else 'above'}"
        )


class CapExceeded(SplitRankError, RuntimeError):
    """Iteration cap hit before the target was reached.

    ``state`` carries whatever the caller had at that point (an iterate or a
    trace).
    """

    def __init__(self, cap, state=None, message=None):
        self.cap = cap
        self.state = state
        super().__init__(message or f"iteration cap {cap} exceeded")


class InvalidFacet(SplitRankError, ValueError):
    pass


class UnboundedBigM(SplitRankError, ArithmeticError):
    pass


class NotStabilized(SplitRankError, ValueError):
    pass


class NoSolution(SplitRankError, ArithmeticError):
    pass


class PointNotInQ(SplitRankError, ArithmeticError):
    pass


class Unverified(SplitRankError, AssertionError):
    pass
