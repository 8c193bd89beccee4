"""Exception hierarchy shared by every module."""


class FilmError(Exception):
    """Base class for all errors raised by filmcasimir."""


class InvalidArgumentError(FilmError, ValueError):
    """An input is outside the documented domain."""


class BandEdgeError(InvalidArgumentError):
    """The Fermi level does not reach the first sub-band."""


class NoBoundStateError(FilmError):
    """No effective width with at least one occupied sub-band exists."""


class ConvergenceError(FilmError, ArithmeticError):
    """A numerical procedure exhausted its budget before meeting tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class PrecisionError(FilmError, ArithmeticError):
    """An evaluation was requested where cancellation destroys precision."""
