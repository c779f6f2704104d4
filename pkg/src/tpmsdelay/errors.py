"""Exception types shared across the package."""


class TpmsDelayError(ValueError):
    """Base class for every error raised by this package."""


class NotFiniteError(TpmsDelayError):
    """Some arrival phase is never received (gcd(C_L, W+S) != 1)."""


class InvalidPhaseError(TpmsDelayError):
    pass


class DegenerateConfigError(TpmsDelayError):
    """C_L <= S, or a parameter outside the analytic regime."""


class InsufficientHorizonError(TpmsDelayError):
    pass


class EmptyInputError(TpmsDelayError):
    pass


class ZeroDenominatorError(TpmsDelayError):
    pass


class FrameError(TpmsDelayError):
    pass


class BadLengthError(FrameError):
    pass


class ChecksumMismatchError(FrameError):
    pass


class FieldOutOfRangeError(FrameError):
    pass
