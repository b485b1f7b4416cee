"""Exception hierarchy shared by every portkit module."""


class PortkitError(Exception):
    """Base class for all portkit errors."""


class DomainError(PortkitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ModelError(PortkitError, ValueError):
    """The inputs do not satisfy a modelling assumption (e.g. positive drift)."""


class SingularityError(PortkitError, ArithmeticError):
    """A ratio needed by a formula has a zero denominator."""


class CapabilityError(PortkitError, NotImplementedError):
    """The object cannot provide what was asked (e.g. a derivative order)."""


class ConfigError(PortkitError, ValueError):
    """A run configuration is malformed; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class NumericFailure(PortkitError, ArithmeticError):
    """A numerical routine ran out of budget before meeting its tolerance.

    The best estimate reached and its error bound are kept so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, message, estimate=float("nan"), error_bound=float("inf")):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound
