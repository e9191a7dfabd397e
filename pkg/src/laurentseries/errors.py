"""Exception types raised across the package."""


class LaurentError(Exception):
    """Base class for all package errors."""


class DomainError(LaurentError, ValueError):
    """A point, torus or region lies outside where an object is defined."""


class ConfigurationError(LaurentError, ValueError):
    """Invalid parameters (grid too small, unknown domain kind, bad config)."""


class DataInconsistencyError(LaurentError):
    """Computed data contradicts a structural fact, e.g. a coefficient that
    must vanish on a disc axis is above its error bound."""
