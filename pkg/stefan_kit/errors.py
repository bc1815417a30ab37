"""Exception types raised by stefan-kit."""


class StefanKitError(Exception):
    """Base class for all stefan-kit errors."""


class InputError(StefanKitError, ValueError):
    """Problem data or command-line input is invalid."""


class DomainError(StefanKitError, ValueError):
    """An argument lies outside the domain of an operation."""


class PoleError(DomainError):
    """A function was evaluated at its pole."""


class GridError(DomainError):
    """A verification grid or stencil is degenerate."""


class RegimeError(StefanKitError):
    """An operation was requested in the wrong physical regime."""


class SolverError(StefanKitError, RuntimeError):
    """A root solve failed to bracket or converge."""


class StabilityError(StefanKitError):
    """An explicit time step exceeds the stability limit."""
