"""Exception types shared across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """Input data violates a format or value contract.

    Messages carry the location (line number, row, field) whenever one exists,
    so CLI users can find the offending record.
    """


class InsufficientHistoryError(ValidationError):
    """A series is too short to yield any trainable rows."""


class ConfigError(ValueError):
    """A configuration combination produces no usable work (e.g. zero CV splits)."""


class CheckpointError(ValueError):
    """A tuning checkpoint is corrupt or inconsistent with the invocation."""


class NonConvergenceError(RuntimeError):
    """The multiplicative fit did not converge within its iteration budget."""

    def __init__(self, message: str, last_objective: float):
        super().__init__(message)
        self.last_objective = last_objective
