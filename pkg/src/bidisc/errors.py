"""Exception hierarchy with machine-readable tags.

Every error raised by the public API carries a short stable ``tag`` that the
command line layer serializes verbatim, so scripted callers can dispatch on it
without parsing prose.
"""


class BidiscError(Exception):
    """Base class for all package errors."""

    tag = "ERROR"


class InvalidPoint(BidiscError):
    """A coordinate is not strictly inside the unit disc (or failed to parse)."""

    tag = "INVALID_POINT"


class NotSolvable(BidiscError):
    """The two-point Pick problem has no holomorphic solution."""

    tag = "NOT_SOLVABLE"


class DegenerateData(BidiscError):
    """Coinciding nodes or parameters where distinct ones are required."""

    tag = "DEGENERATE"


class DiagonalOutput(BidiscError):
    """The two constructed disc arguments coincide (c is a fixed point)."""

    tag = "DIAGONAL_OUTPUT"


class DiagonalPoles(BidiscError):
    """The two poles coincide; the two-pole problem is not defined."""

    tag = "DIAGONAL_POLES"


class PoleAtBase(BidiscError):
    """A pole coincides with the base point; the value degenerates."""

    tag = "POLE_AT_BASE"


class NoConvergence(BidiscError):
    """The multistart solver exhausted its budget without a certificate."""

    tag = "NO_CONVERGENCE"


class NoCandidate(BidiscError):
    """The two-candidate inversion found no consistent kernel direction."""

    tag = "NO_CANDIDATE"


class NoFeasibleDisc(BidiscError):
    """No interpolating analytic disc passed the oracle's residual gate."""

    tag = "NO_FEASIBLE_DISC"
