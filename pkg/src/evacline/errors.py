"""Exception types shared across the package."""


class EvaclineError(Exception):
    """Base class for all package errors."""


class InfeasibleError(EvaclineError):
    """The requested problem has an empty feasible region."""


class NonConvergenceError(EvaclineError):
    """A numerical routine failed to reach the requested tolerance."""


class HorizonTooShortError(EvaclineError):
    """A strategy does not resolve the required exit placements within its horizon."""


class StrategyFormatError(EvaclineError):
    """A strategy file is malformed (bad header, overlap, discontinuity, speed violation)."""
