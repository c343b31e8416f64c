"""Exception and warning types raised by the engine."""


class TropDiffError(Exception):
    """Base class for engine errors."""


class SemiringTagError(TropDiffError, TypeError):
    """Operands live in different semirings."""


class TruncationExhausted(TropDiffError):
    """A computation needs coefficients beyond the known truncation degree."""


class UnsupportedTemplate(TropDiffError):
    """The polynomial or template falls outside what the leading-coefficient solver handles."""


class UnsupportedEquation(TropDiffError):
    """The classical ODE oracle cannot solve this equation (singular leading coefficient)."""


class ResourceLimitExceeded(TropDiffError):
    """A brute-force enumeration would exceed its configured budget."""


class ParseError(TropDiffError, ValueError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class TruncationWarning(UserWarning):
    """A value was computed from a series that vanishes within its truncation."""
