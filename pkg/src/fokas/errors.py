"""Exception types used across the library.

The CLI maps these onto its exit codes: configuration problems are
distinguished from violated mathematical preconditions, which are in turn
distinguished from plain numerical failure (an integral that did not
converge within its budget).
"""


class FokasError(Exception):
    """Base class for all library errors."""


class InvalidGeometryError(FokasError):
    """A contour or segment with degenerate geometry (zero length/radius,
    truncation not beyond the inner radius, ...)."""


class IntegrandSingularityError(FokasError):
    """A non-finite integrand value was met at a quadrature node."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"integrand is not finite at z = {point}")


class UnconvergedError(FokasError):
    """An adaptive integral exhausted its subdivision budget.

    Carries the best available result so callers can report the estimate
    instead of silently using a wrong value.
    """

    def __init__(self, result, message=None):
        self.result = result
        super().__init__(
            message
            or f"quadrature did not converge (error estimate {result.error_estimate:.3e})"
        )


class DomainConditionError(FokasError):
    """A function violates the boundary/nonlocal conditions of Dom L.

    ``condition`` names the violated constraint, e.g. ``"phi'(0) = 0"``.
    """

    def __init__(self, condition, magnitude=None):
        self.condition = condition
        self.magnitude = magnitude
        extra = "" if magnitude is None else f" (|violation| = {magnitude:.3e})"
        super().__init__(f"domain condition violated: {condition}{extra}")


class CompatibilityError(DomainConditionError):
    """Initial datum incompatible with the boundary condition (e.g. Q(0) != 0)."""


class SymbolPoleError(FokasError):
    """The spectral symbol was requested at one of its poles."""


class KernelSingularityError(FokasError):
    """A forward kernel was requested at a spectral point where it is singular."""


class SelectionFailureError(FokasError):
    """No value on the contour-offset ladder could be certified."""


class SchemeFailureError(FokasError):
    """A finite-difference reference scheme became unstable."""


class DiscretizationError(FokasError):
    """A reference discretization produced a singular or unusable system."""


class ConfigError(FokasError):
    """Invalid run configuration. ``field`` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
