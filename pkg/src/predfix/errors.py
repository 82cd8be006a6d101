"""Exception types shared across the package."""

from __future__ import annotations


class InternalInvariantError(RuntimeError):
    """Two supposedly-equivalent computations disagreed, or an iteration
    exceeded its proven step bound.  Always a bug, never bad input."""


class ValidationError(ValueError):
    """Rejected input, carrying a stable error code and a document path."""

    def __init__(self, code: str, path: str, message: str):
        super().__init__(f"{code} at {path}: {message}")
        self.code = code
        self.path = path
        self.message = message


class CapExceededError(ValidationError):
    """An enumeration was refused because it would exceed its size cap."""

    def __init__(self, path: str, message: str):
        super().__init__("E_CAP", path, message)
