"""Exception types shared across the package."""


class PhaseObsError(Exception):
    """Malformed input or broken precondition (wrong shape, zero vector, ...)."""


class ValidationError(PhaseObsError):
    """Physics-level validation failure: non-PSD matrix, norm violation,
    numerically corrupted probability, and the like."""
