"""Exception hierarchy.

Every error raised by the library derives from :class:`RelalterError`, which
is itself a :class:`ValueError` so callers that only care about bad input can
catch the builtin.  ``code`` is the short machine name the CLI prints.
"""

from __future__ import annotations

__all__ = [
    "RelalterError",
    "InvalidInputError",
    "HorizonError",
    "SuperluminalError",
    "NegativeQuantityError",
    "FrameMismatchError",
    "InvalidGridError",
    "MissingPotentialError",
    "ZeroModeError",
    "ConvergenceError",
    "PoleCrossingError",
    "VerificationError",
]


class RelalterError(ValueError):
    code = "error"


class InvalidInputError(RelalterError):
    code = "invalid-input"


class HorizonError(RelalterError):
    """Radius at or inside the Schwarzschild radius 2GM/c^2."""

    code = "horizon"


class SuperluminalError(RelalterError):
    code = "superluminal"


class NegativeQuantityError(RelalterError):
    code = "negative-quantity"


class FrameMismatchError(RelalterError):
    code = "frame-mismatch"


class InvalidGridError(RelalterError):
    code = "invalid-grid"


class MissingPotentialError(RelalterError):
    code = "missing-potential"


class ZeroModeError(RelalterError):
    code = "zero-mode"


class ConvergenceError(RelalterError):
    """Eigen solve failed or produced pairs outside the residual bound.

    ``diagnostics`` holds whatever the solver reported (LAPACK info, the
    per-mode residuals and the bound they were held to).
    """

    code = "convergence"

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class PoleCrossingError(RelalterError):
    code = "pole-crossing"


class VerificationError(RelalterError):
    code = "verification-failed"
