"""Exception types, split into a usage class and a runtime class.

``ConfigError`` covers everything a user can fix by editing the
configuration or command line; the remaining errors signal numerical or
physical failures of a run that was configured correctly.
"""


class CavringError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CavringError, ValueError):
    """Invalid configuration value, key, or combination (usage class)."""


class DomainError(CavringError, ValueError):
    """Input outside the mathematical domain of a formula.

    Raised e.g. for cos(theta) < 0 where the superradiance boundary is
    not defined, or for |imbalance| exceeding the total atom number.
    """


class NonFiniteError(CavringError, RuntimeError):
    """A trajectory produced NaN/inf (numerical runtime failure)."""

    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


class NonStationaryError(CavringError, RuntimeError):
    """Tail window of a time series is not stationary.

    Carries the tail average anyway so callers can record the value
    while marking the point unconverged.
    """

    def __init__(self, message, value=None, rel_diff=None, n_sigma=None):
        super().__init__(message)
        self.value = value
        self.rel_diff = rel_diff
        self.n_sigma = n_sigma
