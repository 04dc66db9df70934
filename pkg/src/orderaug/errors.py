"""Shared error base class.

Every toolkit exception carries a stable ``code`` string so CLI output and
journals can report machine-readable diagnostics.
"""

from __future__ import annotations


class OrderAugError(Exception):
    """Base class for all toolkit errors."""

    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def __str__(self) -> str:
        return f"{self.code}: {self.message}" if self.message != self.code else self.code


class IoError(OrderAugError):
    """File could not be read or written."""

    code = "IoError"
