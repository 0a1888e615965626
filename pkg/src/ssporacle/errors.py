"""Exception hierarchy shared by every stage of the compiler and simulators."""


class SSPOracleError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidWidth(SSPOracleError):
    pass


class BadQubit(SSPOracleError):
    pass


class OverlappingOperands(SSPOracleError):
    pass


class InvalidGate(SSPOracleError):
    pass


class NotReversible(SSPOracleError):
    pass


class ParseError(SSPOracleError):
    pass


class NotClassical(SSPOracleError):
    pass


class WidthMismatch(SSPOracleError):
    pass


class QubitBudgetExceeded(SSPOracleError):
    pass


class UseMeasureOp(SSPOracleError):
    pass


class WidthOverflow(SSPOracleError):
    pass


class EmptyInstance(SSPOracleError):
    pass


class InvalidValue(SSPOracleError):
    pass


class TargetTooWide(SSPOracleError):
    pass


class InvalidMask(SSPOracleError):
    pass


class TargetExceedsMax(SSPOracleError):
    pass


class TooLargeForBruteForce(SSPOracleError):
    pass


class VerificationFailed(SSPOracleError):
    """Oracle disagrees with the classical reference.

    ``mask`` is a concrete selection pattern on which the two disagree.
    """

    def __init__(self, message, mask=None):
        super().__init__(message)
        self.mask = mask


class NoSolutions(SSPOracleError):
    pass


class InvalidBaseline(SSPOracleError):
    pass
