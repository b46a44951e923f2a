"""Exception types shared across the package."""


class CfaError(Exception):
    """Base class for every error raised by this package."""


class MalformedCode(CfaError, ValueError):
    pass


class RangeError(CfaError, ValueError):
    pass


class LengthError(CfaError, ValueError):
    pass


class AlphabetError(CfaError, ValueError):
    """A symbol outside the machine's alphabet was supplied."""


class AlphabetMismatch(CfaError, ValueError):
    """Two machines combined by a construction disagree on their alphabets."""


class InvariantViolation(CfaError, ValueError):
    pass


class ParseError(CfaError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class CapExceeded(CfaError, RuntimeError):
    pass


class StackError(CfaError, RuntimeError):
    pass


class NormalFormError(CfaError, ValueError):
    pass


class OutputAlphabetError(CfaError, ValueError):
    pass


class HomomorphismError(CfaError, ValueError):
    pass


class UnknownFamily(CfaError, KeyError):
    pass


class NoMachine(CfaError, LookupError):
    pass


class NotInSpan(CfaError, ValueError):
    pass


class ScaleError(CfaError, ValueError):
    pass


class DivisionByZero(CfaError, ZeroDivisionError):
    pass


class UnknownSuite(CfaError, KeyError):
    pass
