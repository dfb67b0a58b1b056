"""Errors raised by dipolar_eie.

Invalid user input is a ValueError, numerical failures are RuntimeErrors.
"""

from typing import Optional


class InvalidStateError(ValueError):
    """A matrix is not a valid two-qubit density matrix."""


class InvalidRegionError(ValueError):
    """Observables lie outside the domain of a closed-form expression."""


class ConfigError(ValueError):
    """A configuration value is invalid.

    field: dotted path of the offending entry, e.g. ``params.alpha``
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class IntegrationError(RuntimeError):
    """The time integration could not be completed.

    time: the (scaled) time reached when the integrator gave up, if known
    """

    def __init__(self, message: str, time: Optional[float] = None):
        super().__init__(message)
        self.time = time


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
