"""Exception hierarchy shared by every module of the package."""


class StellarKernelError(Exception):
    """Base class for all package errors."""


class RangeError(StellarKernelError, ValueError):
    """An integer argument lies outside the supported range."""


class DomainError(StellarKernelError, ValueError):
    """A value lies outside the mathematical domain of an operation."""


class DivergentIntegralError(DomainError):
    """A Gaussian integral has a non-positive real quadratic coefficient."""


class NormalizationError(StellarKernelError, ValueError):
    """Input amplitudes are not normalized."""


class DegenerateStateError(StellarKernelError, ValueError):
    """A construction produced the zero vector, which is not a state."""


class ShapeError(StellarKernelError, ValueError):
    """Array arguments have incompatible shapes."""


class BudgetError(StellarKernelError, RuntimeError):
    """A closed-form evaluation would exceed its term budget."""


class AccuracyError(StellarKernelError, RuntimeError):
    """A numerical quadrature did not reach the requested accuracy."""


class TruncationError(StellarKernelError, RuntimeError):
    """A Fock-basis truncation leaves too much norm in the tail."""


class PremiseError(StellarKernelError, ValueError):
    """The fidelity premises of the finite-rank approximation bound fail."""


class ConvergenceError(StellarKernelError, RuntimeError):
    """An iterative solver hit its iteration cap.

    The best iterate found so far is available as ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DegenerateLabelsError(StellarKernelError, ValueError):
    """Training labels contain a single class."""


class TruncationWarning(UserWarning):
    """A Fock expansion was truncated before its tail mass became negligible."""
