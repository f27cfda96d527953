"""
Exception hierarchy for zitterdyn.

Every error raised on purpose by the package derives from ZitterdynError and
carries a ``details`` dict, which the CLI serializes to the error stream.
"""


class ZitterdynError(Exception):
    """Base class for all zitterdyn errors."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        """Machine-readable form used for the CLI error JSON."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


class ModelViolationError(ZitterdynError, ValueError):
    """Input outside the physical domain of the model (|beta| >= 1, d <= 0, r < d, ...)."""


class RetardationError(ZitterdynError):
    """The light-cone condition could not be solved on the given history."""


class PropagationError(ZitterdynError):
    """
    Trajectory propagation aborted (fold, speed guard, residual tolerance).

    A residual failure carries the last attempt as ``report``.
    """


class ContourError(ZitterdynError):
    """Argument-principle count failed (contour too close to a root, non-integer winding)."""


class CertificationError(ZitterdynError):
    """Newton-found roots and the argument-principle count disagree."""


class ConfigError(ZitterdynError):
    """Invalid configuration file or command-line flags."""


class ExportError(ZitterdynError):
    """An output file could not be written."""


class SeriesDivergenceWarning(UserWarning):
    """A power series was summed outside its radius of convergence."""


def _jsonable(value):
    # numpy scalars and complex numbers show up in details
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, "item"):
        try:
            return _jsonable(value.item())
        except (TypeError, ValueError):
            pass
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
