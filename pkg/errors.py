"""
Exception hierarchy shared by every module.

Each family carries the process exit code the CLI returns for it:
- 1: malformed input text (field specs, function specs, files)
- 2: mathematically invalid input (bad c, reducible modulus, ...)
- 3: resource guard tripped
- 4: an identity that must hold did not
"""


class CCError(Exception):
    """Base class for every error raised by the toolkit."""
    exit_code = 2


# --- Parse errors (exit 1) ---

class ParseError(CCError):
    exit_code = 1


class FieldSpecError(ParseError):
    pass


class FuncSpecError(ParseError):
    pass


class LutFormatError(ParseError):
    pass


class MapFormatError(ParseError):
    pass


# --- Invalid mathematical input (exit 2) ---

class MathInputError(CCError):
    exit_code = 2


class NotPrime(MathInputError):
    pass


class ReducibleModulus(MathInputError):
    pass


class DegreeMismatch(MathInputError):
    pass


class NotADivisor(MathInputError):
    pass


class DivideByZero(MathInputError, ZeroDivisionError):
    pass


class CodomainViolation(MathInputError):
    pass


class DomainMismatch(MathInputError):
    pass


class NotAPermutation(MathInputError):
    pass


class InvalidC(MathInputError):
    pass


class NotDOOrigin(MathInputError):
    pass


class HypothesisViolated(MathInputError):
    pass


class EvenCharacteristic(MathInputError):
    pass


class NotAGraph(MathInputError):
    pass


class NotCAffine(MathInputError):
    pass


class BadParameters(MathInputError):
    pass


# --- Resource limits (exit 3) ---

class ResourceLimit(CCError):
    exit_code = 3


class WorkLimitExceeded(ResourceLimit):
    def __init__(self, needed: int, limit: int, what: str = "computation"):
        super().__init__(f"{what} needs {needed} elementary terms, work limit is {limit}")
        self.needed = needed
        self.limit = limit


# --- Failed identities (exit 4) ---

class ReproductionMismatch(CCError):
    exit_code = 4


class IdentityViolation(ReproductionMismatch):
    pass


class NonRationalResult(ReproductionMismatch):
    pass
