"""Exception and warning classes shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ParityError(DomainError):
    """A closed form was requested for a dimension of the wrong parity."""


class UnsupportedModeError(DomainError):
    """The requested evolution mode (Euclidean or real time) is not supported."""


class SingularTimeError(DomainError):
    """Real-time evaluation requested at a caustic, where the kernel is singular."""


class ConvergenceWarning(RuntimeWarning):
    """A quadrature or series did not reach the requested tolerance."""


class ConvergenceError(RuntimeError):
    """A computation could not reach its tolerance.

    The achieved error estimate is available as ``estimate``.
    """

    def __init__(self, message, estimate=float("nan")):
        super().__init__(message)
        self.estimate = estimate
