"""Exception hierarchy shared by all ptosc modules."""


class PTOscError(Exception):
    """Base class for every error raised by ptosc."""


class DomainError(PTOscError, ValueError):
    """An argument lies outside the domain of the operation."""


class BranchPointError(DomainError):
    """Evaluation requested exactly at the branch point x = ic."""


class SingularityError(DomainError):
    """The centrifugal core is evaluated on its pole."""


class PoleError(DomainError):
    """Kummer denominator parameter b is a nonpositive integer."""


class NumericalQualityError(PTOscError):
    """A numerical result failed its quality or convergence checks."""


class NonConvergenceError(NumericalQualityError):
    """An iterative or series evaluation hit its term cap."""


class TruncationError(NumericalQualityError):
    """The quadrature integrand has not decayed at the window edges."""


class CancellationError(NumericalQualityError):
    """Contour-shifted integrals lost too many digits to cancellation."""


class NormalizationError(NumericalQualityError):
    """The c-norm of a state is too close to zero to normalize by it."""


class InsufficientResolutionError(NumericalQualityError):
    """Fewer eigenpairs than requested passed the acceptance filters.

    The ``diagnostics`` attribute holds one dict per inspected candidate.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class ConfigError(PTOscError, ValueError):
    """Invalid command-line or run configuration."""
