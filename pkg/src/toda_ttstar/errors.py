"""Exception hierarchy shared by all subpackages."""


class TodaError(Exception):
    """Base class for errors raised by toda_ttstar."""


class FrameError(TodaError, ValueError):
    """Malformed or inconsistent frame data (shapes, singular pairings, bad parameters)."""


class NotFixedPointError(TodaError):
    """The structure is not a Z_{n+1}-fixed point (no omega-cycle, no compatible signs, ...)."""


class AntiSymmetryError(TodaError, ValueError):
    """A tuple violates the anti-symmetry condition for the requested l."""


class ConvergenceError(TodaError):
    """Newton iteration failed to reach the requested residual."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class InvalidDataError(TodaError, ValueError):
    """Asymptotic data, grid or options outside the accepted domain."""
