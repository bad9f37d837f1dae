"""Exception taxonomy shared by all ffstat modules.

Every domain error raised by the library derives from ``FFStatError`` so
the CLI can map error families onto its exit-code contract.
"""


class FFStatError(Exception):
    """Base class for all ffstat domain errors."""


# --- field construction / arithmetic ---------------------------------------

class NonPrimeError(FFStatError):
    """The requested characteristic is not a prime number."""


class FieldTooLargeError(FFStatError):
    """p**k exceeds the configured field-size ceiling."""


class BadExtensionDegreeError(FFStatError):
    """Extension degree k < 1."""


class DivisionByZeroError(FFStatError, ZeroDivisionError):
    """Inverse of zero, or polynomial division by the zero polynomial."""


# --- polynomial ring --------------------------------------------------------

class FieldMismatchError(FFStatError):
    """Operands live in different fields."""


class NotMonicError(FFStatError):
    """A monic polynomial was required."""


class BothZeroError(FFStatError):
    """gcd(0, 0) is undefined."""


class BadIntervalError(FFStatError):
    """Interval parameter h outside 0 <= h < deg A."""


class BadLiteralError(FFStatError, ValueError):
    """Malformed polynomial literal."""


# --- sieve / tables ---------------------------------------------------------

class BudgetExceededError(FFStatError):
    """A table build would exceed the configured memory budget."""


class CacheFormatError(FFStatError):
    """A table cache file failed magic/version/CRC validation."""


# --- statistics -------------------------------------------------------------

class ZeroShiftError(FFStatError):
    """Correlation shift K must be nonzero."""


class DegreeTooLargeError(FFStatError):
    """A shift or summation degree is out of range for the main degree n."""


class NotCoprimeError(FFStatError):
    """Residue A is not coprime to the modulus Q."""


class BadModulusDegreeError(FFStatError):
    """Modulus Q has degree outside the operation's allowed range."""


class BadShiftsError(FFStatError):
    """Shift tuple is invalid (repeated entries, degree >= n, or r < 2)."""


class AllEvenError(FFStatError):
    """All exponents even: the product is nonnegative by construction."""


# --- verification -----------------------------------------------------------

class ConstraintViolationError(FFStatError):
    """Theorem evaluated outside its stated parameter constraints."""

    def __init__(self, constraint, message=None):
        self.constraint = constraint
        super().__init__(message or f"requires {constraint}")


class TooFewPointsError(FFStatError):
    """Decay fit needs at least three nonzero deviations."""

    def __init__(self, nonzero, zeros):
        self.nonzero = nonzero
        self.zeros = zeros
        super().__init__(
            f"decay fit needs >= 3 nonzero deviations, got {nonzero} "
            f"({zeros} exact zeros excluded)"
        )
