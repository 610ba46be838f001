"""Exception types shared across the package."""


class CmVesselError(Exception):
    """Base class for all package errors."""


class KinematicsError(CmVesselError, ValueError):
    """Raised for invalid kinematic input (non-positive Jacobian, singular F, ...)."""


class GeometryError(CmVesselError, ValueError):
    """Raised for invalid geometric input (non-positive radius, length, ...)."""


class EquilibriumError(CmVesselError, RuntimeError):
    """Raised when a wall equilibrium solve cannot bracket or reach a root."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConvergenceError(CmVesselError, RuntimeError):
    """Raised when a coupling iteration exceeds its cap. Carries the last report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(CmVesselError, ValueError):
    """Raised for configuration schema or invariant violations."""
