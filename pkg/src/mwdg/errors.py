"""Exception types shared across the package."""


class MwdgError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedDegreeError(MwdgError, ValueError):
    """Polynomial degree outside the supported range."""


class CannotDecomposeError(MwdgError, ValueError):
    """Multiwavelet decomposition requested below level 1."""


class CannotIndicateError(MwdgError, ValueError):
    """Troubled-cell indication requested on a mesh too coarse to decompose."""


class InvalidStateError(MwdgError, ValueError):
    """Non-physical state (non-positive density/pressure/energy)."""


class SolverError(MwdgError, RuntimeError):
    """Time integration failure, carrying location diagnostics."""

    def __init__(self, message, element=None, time=None):
        if element is not None:
            message = f"{message} (element {element}, t={time})"
        super().__init__(message)
        self.element = element
        self.time = time
