"""Exception types raised across the package.

Every error carries enough context to be rendered as a one-line JSON
object by the command line front end.
"""


class IpencError(Exception):
    """Base class. ``exit_code`` is the process status used by the CLI."""

    exit_code = 2

    def as_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class LimitError(IpencError):
    """A configured size limit or the integer range was exceeded."""

    exit_code = 3


# modmath
class NotSquareFree(IpencError):
    def __init__(self, q, p):
        super().__init__(f"{q} is divisible by {p}^2")
        self.q = q
        self.p = p


class Overflow(LimitError):
    pass


class NotPrime(IpencError):
    pass


# zqlinalg
class NotAFactor(IpencError):
    pass


class BadPermutation(IpencError):
    pass


class NotTriangular(IpencError):
    pass


# predicates
class DomainMismatch(IpencError):
    pass


class TooLarge(LimitError):
    pass


class BadParams(IpencError):
    pass


class ModulusMismatch(IpencError):
    pass


# encoders
class QTooSmall(IpencError):
    pass


class KExceedsN(IpencError):
    pass


class BadK(IpencError):
    pass


class PatternMismatch(IpencError):
    pass


# bounds
class NotTriangularPattern(IpencError):
    pass


class NotDiagonalPattern(IpencError):
    pass


class UnverifiedReduction(IpencError):
    pass


class Unsupported(IpencError):
    pass


class CapExceeded(LimitError):
    def __init__(self, needed, cap):
        super().__init__(f"enumeration needs {needed} assignments, cap is {cap}")
        self.needed = needed
        self.cap = cap


# randomized
class BadEps(IpencError):
    pass


class QTooSmallForError(IpencError):
    pass


class ExactUnavailable(IpencError):
    pass
