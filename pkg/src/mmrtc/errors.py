"""Exception types shared across the toolkit."""


class MmrtcError(Exception):
    """Base class for all toolkit errors."""


class InstanceError(MmrtcError):
    """Base class for instance-file problems."""


class MalformedHeader(InstanceError):
    pass


class NonRectangularGrid(InstanceError):
    pass


class InvalidWeight(InstanceError):
    pass


class InvalidRoot(InstanceError):
    pass


class RootOnObstacle(InstanceError):
    pass


class DuplicateRoots(InstanceError):
    pass


class DisconnectedFreeSpace(InstanceError):
    pass


class NoPath(MmrtcError):
    """No path exists between the requested endpoints."""


class InfeasibleReduction(MmrtcError):
    """Some vertex of the full graph is missing from every residual graph."""


class InvalidResidual(MmrtcError):
    """A residual graph does not contain its robot's root."""


class WarmstartMismatch(MmrtcError):
    """A warm-start tree uses an edge absent from the robot's residual graph."""


class HeuristicInvariantViolation(MmrtcError):
    """A removal heuristic broke one of its completeness guarantees (internal bug)."""


class SolverFailed(MmrtcError):
    """The external solver exited without producing a usable solution."""


class SolutionParseError(MmrtcError):
    """A solver solution file could not be parsed."""


class InfeasibleModel(MmrtcError):
    """The solver reported the model infeasible, which signals a reduction or model bug."""


class SolverOutputInvalid(MmrtcError):
    """Solver variable values do not decode into rooted trees."""


class OracleLimitExceeded(MmrtcError):
    """Instance is too large for the exact brute-force search."""


class OpenPathError(MmrtcError):
    """A coverage path is not closed or breaks sub-cell adjacency."""


class CoverageGapError(MmrtcError):
    """A coverage plan misses sub-cells (an invalid solution slipped through)."""
