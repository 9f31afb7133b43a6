"""Exception and warning types raised across the package."""


class ParaxialError(Exception):
    """Base class for every error raised by tiltparax."""


class NonUnitDirection(ParaxialError, ValueError):
    pass


class NonPositiveNu(ParaxialError, ValueError):
    pass


class NonPositiveEpsilon(ParaxialError, ValueError):
    pass


class ZeroKy(ParaxialError, ValueError):
    """Raised by operations that divide by ky when ky == 0."""


class BranchCut(ParaxialError, ValueError):
    """Argument of the principal square root lies on the closed negative real axis."""


class NonFiniteMultiplier(ParaxialError, ValueError):
    def __init__(self, frequency):
        self.frequency = frequency
        super().__init__(f"multiplier is not finite at frequency {frequency!r}")


class PointwiseUndefined(ParaxialError, ValueError):
    pass


class SupportViolation(ParaxialError, ValueError):
    pass


class GridMismatch(ParaxialError, ValueError):
    pass


class WrongSignKy(ParaxialError, ValueError):
    pass


class TruncationTooShort(ParaxialError, ValueError):
    pass


class InvalidGrid(ParaxialError, ValueError):
    pass


class FieldFormatError(ParaxialError):
    pass


class BadMagic(FieldFormatError):
    pass


class LengthMismatch(FieldFormatError):
    pass


class ConfigError(ParaxialError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownKey(ConfigError):
    pass


class MissingKey(ConfigError):
    pass


class ConfigTypeError(ConfigError, TypeError):
    pass


class EdgeLeakWarning(UserWarning):
    """Sampled data does not decay at the grid edges; periodic wrap-around may pollute results."""
