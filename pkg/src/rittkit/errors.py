"""Exception hierarchy shared by every module."""


class RittkitError(Exception):
    """Base class for domain errors raised by rittkit."""


class RingMismatch(RittkitError):
    pass


class InvalidRing(RittkitError):
    pass


class ConstantPolynomial(RittkitError):
    """Raised when a leader is requested from a polynomial with no unknowns."""


class DerivationIndexOutOfRange(RittkitError):
    pass


class UnsupportedCharacteristic(RittkitError):
    pass


class InvalidAutoreducedSet(RittkitError):
    pass


class ZeroTarget(RittkitError):
    pass


class SpecializationDomainError(RittkitError):
    pass


class DivisionByZero(RittkitError, ZeroDivisionError):
    pass


class EmptyInput(RittkitError):
    pass


class UnitOrZeroInput(RittkitError):
    pass


class UnsupportedDegree(RittkitError):
    """Irreducibility over Q is only decided up to degree 4."""


class ParseError(RittkitError):
    """Base for errors raised while reading expressions."""


class ExpressionSyntaxError(ParseError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownVariable(ParseError):
    pass
