"""Exception hierarchy shared by every module."""


class NcStorageError(Exception):
    """Base class; the CLI maps these to nonzero exit codes."""

    exit_code = 2


# field
class ReduciblePolynomial(NcStorageError):
    def __init__(self, poly: int, factor: int):
        super().__init__(f"polynomial {poly:#x} is reducible (factor {factor:#x})")
        self.poly = poly
        self.factor = factor


class DegreeMismatch(NcStorageError):
    pass


class DivisionByZero(NcStorageError, ZeroDivisionError):
    pass


# linear algebra
class DimensionMismatch(NcStorageError):
    pass


class SingularMatrix(NcStorageError):
    pass


class DuplicatePoint(NcStorageError):
    pass


# codes
class TooLong(NcStorageError):
    pass


class NotMds(NcStorageError):
    pass


class BadPivotSet(NcStorageError):
    pass


class TooManySubsets(NcStorageError):
    pass


class KTooLarge(NcStorageError):
    pass


class Unsupported(NcStorageError):
    pass


class MdsRetryExhausted(NcStorageError):
    pass


class NotConstructible(NcStorageError):
    pass


# storage / repair
class SingularSelection(NcStorageError):
    pass


class InsufficientSurvivors(NcStorageError):
    pass


class Disconnected(NcStorageError):
    pass


class NoUnusedVector(NcStorageError):
    pass


class MissingShare(NcStorageError):
    pass


class TooManyFailures(NcStorageError):
    pass


class InsufficientShares(NcStorageError):
    pass


# network
class ConnectivityRetryExhausted(NcStorageError):
    pass


class Unreachable(NcStorageError):
    pass
