"""
Exceptions raised by the GSPN engine.
"""


class NetError(ValueError):
    """Malformed net or net file."""


class AnalysisError(RuntimeError):
    """Base class for failures of a state-space analysis or a numerical solve."""


class StateSpaceExceeded(AnalysisError):
    """Reachability found more states than the configured cap."""


class VanishingLoop(AnalysisError):
    """A cycle among vanishing markings."""


class NotErgodic(AnalysisError):
    """The tangible chain has more than one communicating class."""


class SolverFailure(AnalysisError):
    """The solution does not meet the residual tolerance."""
