"""Exception hierarchy shared by every module of the package."""


class QMHError(Exception):
    """Base class for all errors raised by :mod:`qmh`."""


class DomainError(QMHError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """The argument sits on (or numerically too close to) a pole."""


class HypothesisError(DomainError):
    """A hypothesis of the Mehler-Heine theorem is violated.

    ``hypothesis`` names the violated condition, e.g. ``"a_1*n + Re(b_1) not in Z_-"``.
    """

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis


class TruncationError(QMHError, ArithmeticError):
    """A series or product could not be certified within ``max_terms``.

    ``bound`` carries the error bound that was reached.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class DivergenceError(QMHError, ArithmeticError):
    """A series is evaluated outside its disk of convergence."""


class ConvergenceError(QMHError, ArithmeticError):
    """An iterative solver failed to converge.

    ``best`` carries the best iterate (or iterate set) reached.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BoundaryZeroError(QMHError, ArithmeticError):
    """A contour passes through (or too close to) a zero of the integrand."""


class MatchingError(QMHError):
    """A limit zero could not be paired with a scaled polynomial zero."""


class BoxInstabilityError(QMHError):
    """Zero counts changed under dilation of the search box."""
