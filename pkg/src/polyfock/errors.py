"""Exception and warning types shared across the package."""


class PolyfockError(Exception):
    pass


class NotDivisible(PolyfockError):
    """Raised when a polynomial quotient leaves a nonzero remainder.

    The partially filled result (numerator and denominator) is kept on
    ``result`` so callers can report it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ZeroDivisor(PolyfockError):
    pass


class NegativeIndex(PolyfockError, ValueError):
    pass


class OrderTooLarge(PolyfockError, ValueError):
    pass


class GridOrderTooLarge(PolyfockError, ValueError):
    pass


class QuadratureOrderInsufficient(PolyfockError):
    pass


class NotInSubspace(PolyfockError):
    pass


class WindowSubspaceViolation(PolyfockError):
    pass


class UnboundedSymbol(PolyfockError):
    pass


class DivergentWeight(PolyfockError):
    pass


class LengthMismatch(PolyfockError, ValueError):
    pass


class ParseError(PolyfockError, ValueError):
    def __init__(self, message, position=None, expected=()):
        detail = message
        if position is not None:
            detail = f"{message} at position {position}"
        if expected:
            detail += " (expected " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.position = position
        self.expected = tuple(expected)


class TruncationWarning(UserWarning):
    pass
