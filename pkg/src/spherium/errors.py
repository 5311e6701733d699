"""Exception hierarchy shared by every module."""


class SpheriumError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SpheriumError, ValueError):
    """An argument lies outside the domain of the operation."""


class EmptySpectrumError(DomainError):
    """The quantization condition has no admissible (real, positive) root."""


class ConvergenceError(SpheriumError, ArithmeticError):
    """A series or iteration failed to converge within its budget."""


class NumericalError(SpheriumError, ArithmeticError):
    """A numerical invariant was violated (e.g. a degenerate wavefunction node)."""
