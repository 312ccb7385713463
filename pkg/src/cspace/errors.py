"""Exception types shared across the package."""


class SpaceError(Exception):
    """Base class for all domain errors."""


class MissingPairError(SpaceError):
    """A pair of points was never assigned a color."""

    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"pair {pair} has no color assigned")


class DuplicatePairError(SpaceError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"pair {pair} assigned more than once")


class ColorOutOfRangeError(SpaceError):
    def __init__(self, color, color_count, pair=None):
        self.color = color
        self.color_count = color_count
        self.pair = pair
        where = f" on pair {pair}" if pair is not None else ""
        super().__init__(f"color {color}{where} outside 0..{color_count - 1}")


class UnusedColorError(SpaceError):
    def __init__(self, color):
        self.color = color
        super().__init__(f"color {color} does not occur on any pair")


class SamePointError(SpaceError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"pair requires two distinct points, got ({point}, {point})")


class TooSmallError(SpaceError):
    """Operand has fewer points than the operation requires."""


class TooLargeError(SpaceError):
    """Operand exceeds a hard size cap."""


class SizeMismatchError(SpaceError):
    """Two operands that must have equal size do not."""


class BadKError(SpaceError):
    def __init__(self, k, n):
        self.k = k
        self.n = n
        super().__init__(f"subset size k={k} outside 1..{n}")


class EmptyColorSetError(SpaceError):
    """A non-empty color set was required."""


class ArityMismatchError(SpaceError):
    """A fusion map's source arity does not match the space's color count."""


class BadArityError(SpaceError):
    """Requested color count outside 1..C(n,2)."""


class PreconditionFailedError(SpaceError):
    """A documented operation precondition does not hold."""


class SpaceSyntaxError(SpaceError):
    """Malformed space file. Carries the 1-based offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class CounterexampleToContract(SpaceError):
    """No candidate fusion satisfied the finder's contract.

    This is the scientifically interesting outcome: it would falsify a
    proven statement. Carries a full report object for replay.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"no fusion satisfied the contract for {report.finder} "
            f"({len(report.attempted)} merges attempted)"
        )


class BudgetExceededError(SpaceError):
    """Search ran out of its node budget. Carries the frontier for resume."""

    def __init__(self, message, frontier=None):
        self.frontier = frontier
        super().__init__(message)
