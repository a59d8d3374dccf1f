"""Exception types shared across the package."""


class ThetaError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ThetaError):
    """An input lies outside the mathematical domain of the operation."""


class ZeroArgument(DomainError):
    """z = 0 was passed to an operation that is singular at z = 0."""


class BudgetExceeded(ThetaError):
    """The requested certified accuracy was not reached within the term budget."""


class ContourTooClose(ThetaError):
    """|theta| dips below the reliability floor on an integration contour.

    Raised when a zero sits on or very near the sampled circle, making the
    argument-principle count numerically unreliable.
    """

    def __init__(self, message, radius=None, min_modulus=None, k=None):
        super().__init__(message)
        self.radius = radius
        self.min_modulus = min_modulus
        self.k = k


class NoConvergence(ThetaError):
    """Newton refinement did not reach the residual tolerance."""

    def __init__(self, message, k=None, radius=None, iterations=None):
        super().__init__(message)
        self.k = k
        self.radius = radius
        self.iterations = iterations
