"""Exception hierarchy shared by every module."""


class SplitRedError(Exception):
    """Base class for all library errors."""


class PrecisionError(SplitRedError, ArithmeticError):
    pass


class IndistinguishableFromZero(PrecisionError):
    pass


class DivisionByIndistinguishableZero(PrecisionError, ZeroDivisionError):
    pass


class PrecisionExhausted(PrecisionError):
    pass


class InsufficientPrecision(PrecisionError):
    pass


class NonEisenstein(SplitRedError, ValueError):
    def __init__(self, level, index, message):
        self.level = level
        self.index = index
        super().__init__(f"level {level!r}: coefficient of t^{index}: {message}")


class UnsupportedExtensionShape(SplitRedError, ValueError):
    pass


class NonUnit(SplitRedError, ValueError):
    pass


class ParseError(SplitRedError, ValueError):
    def __init__(self, position, message):
        self.position = position
        super().__init__(f"at position {position}: {message}")


class UnknownSymbol(ParseError):
    def __init__(self, position, name):
        self.name = name
        super().__init__(position, f"unknown symbol {name!r}")


class TooLarge(SplitRedError, ValueError):
    pass


class TableViolation(SplitRedError, ValueError):
    pass


class TorsionDegenerate(SplitRedError, ValueError):
    pass


class ResidueCollision(SplitRedError, ValueError):
    pass


class UnknownType(SplitRedError, ValueError):
    pass


class DegreeGuard(SplitRedError, ValueError):
    pass


class NegativeResult(SplitRedError, ValueError):
    pass


class NonIntegralBound(SplitRedError, ValueError):
    pass


class NotTame(SplitRedError, ValueError):
    pass


class NotDivisor(SplitRedError, ValueError):
    pass


class InputInconsistent(SplitRedError, ValueError):
    pass


class DenominatorNotPrimeToP(SplitRedError, ValueError):
    pass


class InconsistentWithE(SplitRedError, ValueError):
    pass
