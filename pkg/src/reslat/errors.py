"""Exception types raised across the package."""


class ReslatError(Exception):
    """Base class for all errors raised by reslat."""


class NotALattice(ReslatError):
    pass


class NotAMonoid(ReslatError):
    pass


class NotResiduated(ReslatError):
    pass


class InconsistentSpec(ReslatError):
    pass


class NoZeroConstant(ReslatError):
    pass


class SignatureMismatch(ReslatError):
    pass


class BudgetExceeded(ReslatError):
    pass


class InvalidSpan(ReslatError):
    pass


class InconsistentConstraints(ReslatError):
    pass


class UnknownGenerator(ReslatError):
    pass


class UnknownRule(ReslatError):
    pass


class MalformedInstantiation(ReslatError):
    pass


class TooLarge(ReslatError):
    pass


class FormatError(ReslatError):
    """Malformed input file; the message names the offending field."""
