"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class DegenerateChannelError(DomainError):
    """The intended channel is too weak to define a beamforming direction."""


class ConvergenceError(ArithmeticError):
    """A series or iteration did not converge within its budget."""


class QuadratureError(ArithmeticError):
    """Adaptive integration could not reach the requested tolerance."""


class SearchFailure(RuntimeError):
    """A bracketing search found no sign change. Indicates a bug, not bad input."""


class ParameterError(ValueError):
    """Invalid experiment parameter; ``field`` names the offending input."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
