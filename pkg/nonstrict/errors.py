"""Exception hierarchy for nonstrict."""

from typing import Optional


class NonstrictError(Exception):
    """Base class for all nonstrict errors."""


class ConfigError(NonstrictError, ValueError):
    """Invalid run configuration, parameter or profile expression."""


class NumericalError(NonstrictError, RuntimeError):
    """A numerical kernel produced non-finite values or failed to converge."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, abserr: float):
        super().__init__(f"{message} (estimate={estimate!r}, abserr={abserr!r})")
        self.estimate = estimate
        self.abserr = abserr


class BlowupError(NumericalError):
    """The requested operation needs a solution that is still smooth."""

    def __init__(self, message: str, t_star: Optional[float] = None):
        if t_star is not None:
            message = f"{message} (T*={t_star!r})"
        super().__init__(message)
        self.t_star = t_star


class CriterionMismatchError(NonstrictError):
    """Closed-form criterion and generic q-scan disagree."""
