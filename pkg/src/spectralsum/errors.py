"""Exception types raised across the package."""


class SpectralSumError(Exception):
    """Base class for all package errors."""


class NotHermitian(SpectralSumError, ValueError):
    pass


class EigFailure(SpectralSumError, RuntimeError):
    pass


class DimensionMismatch(SpectralSumError, ValueError):
    pass


class BudgetExceeded(SpectralSumError, RuntimeError):
    """An enumeration or table would exceed the configured size budget."""


class NotLatticeRepresentable(SpectralSumError, ValueError):
    """Step values a*lambda + b*mu do not sit on a common rational lattice."""


class TailTooHeavy(SpectralSumError, RuntimeError):
    """The Fourier density cannot be resolved within the sampling budget."""


class QuadratureBudgetExceeded(SpectralSumError, RuntimeError):
    pass


class BoundaryTouchesSpectrum(SpectralSumError, ValueError):
    pass


class IllConditioned(SpectralSumError, ArithmeticError):
    pass


class NotCommuting(SpectralSumError, ValueError):
    pass


class StateTooWide(SpectralSumError, ValueError):
    """A sampled state carries non-negligible mass near the grid boundary."""


class StagnationNotReached(SpectralSumError, Warning):
    """Inner N loop never met the stagnation criterion (reported, not raised)."""
