"""Exception hierarchy shared by every module."""


class DireopError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(DireopError, ValueError):
    """Non-finite or otherwise unusable numeric input."""


class DomainError(DireopError, ValueError):
    """Point outside the open domain of a potential, or a non-positive Gamma argument."""


class InvalidSpecError(DireopError, ValueError):
    """A PotentialSpec violates its family's parameter window."""


class SingularExtensionError(InvalidSpecError):
    """A rational extension's polynomial vanishes inside the domain."""


class DegenerateParameterError(DireopError, ValueError):
    """A rational coefficient of an exceptional polynomial has a zero denominator."""


class LevelRangeError(DireopError, ValueError):
    """Requested level index exceeds the number of bound states."""


class FactorizationError(DireopError, ValueError):
    """Partner construction needs a strictly positive energy."""


class NoRealEnergyError(FactorizationError):
    """epsilon**2 < 0, so the Dirac energy is not real."""


class NumericError(DireopError, ArithmeticError):
    """A quadrature or solver produced a non-finite result."""


class GridSingularityError(NumericError):
    """The potential is non-finite at a grid node."""


class DegenerateClusterError(NumericError):
    """Inverse iteration failed to converge."""


class TruncationError(DireopError, RuntimeError):
    """Fewer numeric levels than requested; the truncated domain is too tight."""


class InconsistencyError(DireopError, RuntimeError):
    """Both e^{-int phi} and e^{+int phi} came out square-integrable."""
