"""Exceptions raised by the numerical kernels."""
from typing import Optional


class DelaunayLabError(Exception):
    """Base class for every error raised by delaunaylab."""


class DomainError(DelaunayLabError, ValueError):
    """An input lies outside the domain where the quantity is defined."""


class ConvergenceError(DelaunayLabError):
    """A solver stopped before reaching its tolerance."""

    def __init__(self, message: str, achieved: Optional[float] = None):
        text = message if achieved is None else f'{message} (achieved {achieved:.3e})'
        super().__init__(text)
        self.achieved = achieved


class BracketError(ConvergenceError):
    """The function has no sign change on the requested bracket."""


class DiscretizationError(DelaunayLabError):
    """A property that holds exactly was violated by the discretization."""


class ExportError(DelaunayLabError):
    """A result file could not be written."""
