"""Exception hierarchy.

Every error raised by the library derives from :class:`GaborError`.  The CLI
maps the subclasses onto its exit codes, so new error types should subclass
one of the categories below rather than ``GaborError`` directly.
"""

from __future__ import annotations


class GaborError(Exception):
    """Base class for all library errors."""


class ConfigurationError(GaborError, ValueError):
    """Bad user input: unknown catalog names, invalid parameters, schema errors."""


class UsageError(GaborError, ValueError):
    """Operation called with inconsistent arguments (e.g. mismatched lattices)."""


class PreconditionError(GaborError):
    """A mathematical precondition does not hold (e.g. a Balian-Low lattice)."""


class CapabilityError(GaborError):
    """The object cannot provide what the operation needs (derivatives, transforms)."""


class NumericError(GaborError):
    """A numerical procedure failed to reach its tolerance."""


class QuadratureError(NumericError):
    """Panel refinement did not stabilise.

    ``estimates`` holds the last two (vector) estimates that failed to agree.
    """

    def __init__(self, message, estimates=None, location=None, xi=None):
        super().__init__(message)
        self.estimates = estimates
        self.location = location
        self.xi = xi


class ConvergenceError(NumericError):
    """An iteration stopped before reaching its tolerance."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []
