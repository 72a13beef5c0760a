"""Exception types shared across the library."""


class HarmlabError(Exception):
    """Base class for all library errors."""


class NonRegularGraph(HarmlabError):
    """Operation requires a regular graph."""


class InvalidExponent(HarmlabError):
    """p-norm exponent outside {0} | [1, inf]."""


class UnsupportedGroup(HarmlabError):
    pass


class BallTooLarge(HarmlabError):
    """Cayley ball exceeded the configured vertex cap."""


class PathExitsBall(HarmlabError):
    """A generator path left the truncated ball."""


class GraphTooLargeForExact(HarmlabError):
    """Exact Cheeger enumeration refused; caller may fall back to heuristics."""


class EigensolveFailure(HarmlabError):
    pass


class NonConvergence(HarmlabError):
    """Iterative estimate did not converge; best witness attached."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SupportHitsBoundary(HarmlabError):
    """Distribution support touched the truncation boundary of a ball."""


class SingularSystem(HarmlabError):
    pass


class NegativeMass(HarmlabError):
    pass


class MaxNormTooLarge(HarmlabError):
    pass


class MassMismatch(HarmlabError):
    pass


class Infeasible(HarmlabError):
    pass


class DisconnectedRegion(HarmlabError):
    pass


class NonZeroSum(HarmlabError):
    pass


class DisconnectedSet(HarmlabError):
    pass


class ComplementDisconnected(HarmlabError):
    pass


class EnumerationBudgetExceeded(HarmlabError):
    """Connected-subset enumeration hit its budget; partial data attached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DenseBudgetExceeded(HarmlabError):
    pass


class NotATree(HarmlabError):
    pass


class IoError(HarmlabError):
    pass
