"""Exception hierarchy shared by every module."""


class NdkpError(Exception):
    """Base class for all errors raised by ndkp."""


class NonFiniteValue(NdkpError, ValueError):
    pass


class SingularMatrix(NdkpError):
    pass


class ReciprocalAtZero(NdkpError, ZeroDivisionError):
    pass


class SingularConfiguration(NdkpError):
    """Lattice or spectral data violate an invertibility condition."""


class ZeroFactorInInverseRange(NdkpError, ZeroDivisionError):
    pass


class IndexOutOfWindow(NdkpError, IndexError):
    pass


class OutOfWindow(IndexOutOfWindow):
    pass


class SylvesterResidualTooLarge(NdkpError):
    """The factorized M failed its Sylvester check (an internal bug, not bad input)."""


class TauZero(NdkpError):
    """I + MC is singular: the solution has a pole at this point."""


class SingularShift(NdkpError):
    """aI + K or bI + L is singular for the requested negative power."""


class InternalMismatch(NdkpError):
    """Two algebraically equal evaluation routes disagree."""


class ZeroTransformFactor(NdkpError, ZeroDivisionError):
    pass


class DegenerateDenominator(NdkpError, ZeroDivisionError):
    pass


class NonConstantSequence(NdkpError):
    pass


class GenerationFailed(NdkpError):
    pass


class ConfigError(NdkpError):
    pass
