"""Exception types raised across the package."""

from __future__ import annotations


class ConfkeyError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidArgumentError(ConfkeyError, ValueError):
    """Raised when an argument violates an operation's precondition."""


class ContractViolationError(ConfkeyError):
    """Raised when a caller breaks a documented contract between modules."""


class CapacityError(ConfkeyError):
    """Raised when a state or structure exceeds the supported size."""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what} of size {size} exceeds the limit of {limit}")


class GenerationFailureError(ConfkeyError):
    """Raised when a random geometric graph stays disconnected after every retry."""

    def __init__(self, n_nodes: int, radius: float, attempts: int):
        self.n_nodes = n_nodes
        self.radius = radius
        self.attempts = attempts
        super().__init__(
            f"No connected placement of {n_nodes} nodes with radius {radius} "
            f"after {attempts} attempts"
        )


class ConfigError(ConfkeyError):
    """Raised for experiment-config syntax or semantic errors."""

    def __init__(self, message: str, *, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if key is not None:
            parts.append(f"`{key}`")
        prefix = ", ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
