"""Exception types raised by the pdmkepler package.

Two families matter to callers: ``PhysicsDomainError`` means the requested
state does not exist for the given parameters (exit code 2 on the command
line), ``NumericalError`` means a solver or consistency check failed
(exit code 3).
"""


class PdmKeplerError(Exception):
    """Base class for every error raised by the library."""


class PhysicsDomainError(PdmKeplerError):
    """The parameters put the requested state outside the physical domain."""


class FallToCenterError(PhysicsDomainError):
    """(j+1/2)^2 + a^2 - alpha^2 < 0: no real effective orbital number."""


class NoBoundStateError(PhysicsDomainError):
    """No bound level exists on the positive-energy branch."""


class ParameterDomainError(PhysicsDomainError):
    """An operation was called outside its precondition."""


class NonPositiveMassError(PhysicsDomainError):
    """The effective mass m*(r) is not positive somewhere on the mesh."""


class NoClassicalWellError(PhysicsDomainError):
    """p_r^2 is negative everywhere, so there is nothing to quantize."""


class NumericalError(PdmKeplerError):
    """A numerical procedure failed to deliver the requested accuracy."""


class MeshTooCoarseError(NumericalError):
    """The requested state is not resolved inside the discretization box."""


class BracketError(NumericalError):
    """A bracketed root search did not see exactly one sign change.

    ``diagnostics`` keeps the scanned points so the failure can be reported
    instead of silently widening the bracket.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge."""


class ConsistencyError(NumericalError):
    """A closed-form result failed its internal self-check."""
