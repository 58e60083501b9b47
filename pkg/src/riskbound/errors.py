"""
Error types shared across riskbound.

Every error also subclasses the builtin it refines, so callers that only know
ValueError/RuntimeError keep working. The CLI maps the ValueError family to
exit code 2 and NumericalError to exit code 3.
"""


class RiskBoundError(Exception):
    """Base class for all riskbound errors."""


class ParameterDomainError(RiskBoundError, ValueError):
    """Shape or distribution parameters outside their domain."""


class UnsupportedError(RiskBoundError, ValueError):
    """Operation not defined for this kind (basis, affine map, exp-family form)."""


class IncompatiblePairError(RiskBoundError, ValueError):
    """Relative entropy closed form requested for a pair without common standardization."""


class ConfigurationError(RiskBoundError, ValueError):
    """Invalid experiment configuration or violated precondition."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InputError(RiskBoundError, ValueError):
    """Non-finite integrand values fed to a risk-sensitive integral."""


class NumericalError(RiskBoundError, RuntimeError):
    """A numerical procedure failed (eigen-solve, linear solve, divergence)."""


class DomainError(NumericalError):
    """Λ became non-finite while searching over c."""

    def __init__(self, message: str, largest_finite_c: float | None = None):
        self.largest_finite_c = largest_finite_c
        super().__init__(message)


class SolverError(NumericalError):
    """Time integration produced a non-finite state."""

    def __init__(self, message: str, z1: float, z2: float, t: float):
        self.z1, self.z2, self.t = z1, z2, t
        super().__init__(f"{message} at (z1={z1:.6g}, z2={z2:.6g}, t={t:.6g})")


class PhysicalValidityError(NumericalError):
    """Model coefficients left their physical range (e.g. conductivity <= 0)."""


class NodeEvaluationError(NumericalError):
    """Model evaluation failed at a quadrature or collocation node."""

    def __init__(self, message: str, node: tuple[float, ...]):
        self.node = node
        coords = ", ".join(f"{c:.6g}" for c in node)
        super().__init__(f"{message} at node ({coords})")
