"""Shared exception roots.

Concrete errors live next to the code that raises them; these bases exist so
the CLI can map failures to exit codes (validation -> 1, operational -> 2).
"""


class AdStoryError(Exception):
    """Base for all errors raised by this package."""


class ValidationFailure(AdStoryError):
    """Input or state violates a documented contract (CLI exit code 1)."""


class OperationalFailure(AdStoryError):
    """I/O, network, or annotator trouble (CLI exit code 2)."""
