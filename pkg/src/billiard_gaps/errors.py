"""Exception hierarchy shared by the library and the CLI."""


class BilliardError(Exception):
    """Base class. ``exit_code`` is what the CLI returns for this error."""

    exit_code = 1


class ValidationError(BilliardError, ValueError):
    exit_code = 2


class RationalAlpha(ValidationError):
    pass


class MixedRadicands(ValidationError):
    pass


class InvalidSpec(ValidationError):
    pass


class SquareD(ValidationError):
    pass


class OddIndexRequired(ValidationError):
    pass


class PoolExhausted(ValidationError):
    pass


class MemoryBound(ValidationError):
    pass


class DegenerateDivisor(ValidationError):
    pass


class PrecisionExhausted(BilliardError, ArithmeticError):
    exit_code = 3


class FactorizationTimeout(BilliardError, TimeoutError):
    exit_code = 4


class DivisibilityViolation(BilliardError, AssertionError):
    """An exact division that the gcd identities guarantee has failed."""

    exit_code = 5
