"""Error types shared across the package."""

from __future__ import annotations


class EmbenchError(Exception):
    """Operational failure carrying a machine-readable code.

    Codes are stable identifiers (e.g. ``io_error``, ``revision_mismatch``,
    ``unknown_benchmark``) that tests and CLI callers can branch on.
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"


class InvalidMetadata(EmbenchError):
    """A set of records failed validation; carries the full defect report."""

    def __init__(self, message: str, defects):
        super().__init__("invalid_metadata", message)
        self.defects = list(defects)
