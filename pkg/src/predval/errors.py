"""Exception hierarchy shared by every module in the package."""


class PredvalError(ValueError):
    """Base class for all errors raised by predval."""


class NotPositiveSemidefinite(PredvalError):
    pass


class SizeMismatch(PredvalError):
    pass


class DegenerateColumn(PredvalError):
    pass


class SingularMatrix(PredvalError):
    pass


class SingularSubsample(SingularMatrix):
    """A sub-sample correlation matrix could not be inverted."""


class EmptyInput(PredvalError):
    pass


class LengthMismatch(PredvalError):
    pass


class DegreesOfFreedomExhausted(PredvalError):
    pass


class InvalidRatio(PredvalError):
    pass


class DegenerateRate(PredvalError):
    pass


class ZeroBaseRate(PredvalError):
    pass


class ParseError(PredvalError):
    pass


class ValidationError(PredvalError):
    pass
