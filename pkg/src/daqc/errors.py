"""Exception types shared across the package.

The CLI maps :class:`ValidationError` to exit code 2 and
:class:`ResourceLimitError` to exit code 3.
"""

from __future__ import annotations


class ValidationError(ValueError):
    """Invalid input: bad parameters, non-Hermitian operators, bad indices."""


class StepSizeError(ValidationError):
    """The integrator step is too coarse for the fastest frequency present."""


class ResourceLimitError(RuntimeError):
    """A dense construction would exceed the supported qubit count."""
