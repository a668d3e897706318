"""Exception hierarchy shared by all lsakit modules."""


class LsakitError(Exception):
    """Base class for every error raised by lsakit."""


class FieldMismatch(LsakitError):
    pass


class DivisionByZero(LsakitError, ZeroDivisionError):
    pass


class NoSolution(LsakitError):
    """The linear system has no solution."""


class NotInvertible(LsakitError):
    pass


class DimensionMismatch(LsakitError, ValueError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class DependentSpan(LsakitError, ValueError):
    pass


class NotSubalgebra(LsakitError, ValueError):
    pass


class BaseAlgebraInvalid(LsakitError, ValueError):
    """The base algebra fails the identity required by the requested kind."""


class DatumInvalid(LsakitError, ValueError):
    pass


class MatchedPairInvalid(LsakitError, ValueError):
    pass


class NotDeformationMap(LsakitError, ValueError):
    pass


class EnumerationTooLarge(LsakitError):
    """Raised before an exhaustive search whose candidate space exceeds the cap."""

    def __init__(self, size, cap, what="candidate space"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} has {size} elements, cap is {cap}")


class ParseError(LsakitError, ValueError):
    def __init__(self, message, location=""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
