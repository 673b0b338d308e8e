"""Exception hierarchy.

The CLI maps these onto process exit codes; see :mod:`qwcycle.cli`.
"""


class QWError(Exception):
    """Base class for all package errors."""


class ValidationError(QWError, ValueError):
    """Bad parameters or configuration.

    ``key`` names the offending config key or argument when known.
    """

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class RangeError(ValidationError, IndexError):
    """A position label falls outside the allocated lattice."""


class ShapeError(QWError, ValueError):
    """Array dimensions or supports do not line up."""


class BoundaryError(QWError):
    """Amplitude reached the edge of a finite line lattice."""


class ChannelIntegrityError(QWError):
    """A Kraus set is not trace preserving."""


class NumericalIntegrityError(QWError):
    """Evolution drifted away from a valid state."""


class CapacityError(QWError):
    """Requested work exceeds a configured bound."""
