# --- core/exceptions.py ---

class RydbergSimError(Exception):
    """Base exception class for the Rydberg storage/retrieval simulator."""
    pass


class ConfigError(RydbergSimError, ValueError):
    """Raised when configuration, presets or CLI inputs are missing or malformed."""
    pass


class ParameterError(RydbergSimError, ValueError):
    """Raised when a physical parameter or call argument violates a precondition."""
    pass


class CapacityError(RydbergSimError):
    """Raised when a request would exceed a configured memory cap."""
    pass


class RegimeError(RydbergSimError):
    """Raised when a hard validity condition of the pair approximation fails."""
    pass


class QuadratureError(RydbergSimError):
    """Raised on invalid quadrature panels, or on non-convergence when strict behaviour was requested."""
    pass
