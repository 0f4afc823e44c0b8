"""Exception types shared across the package."""


class JuggleError(Exception):
    """Base class for all package-specific errors."""


class IllegalThrow(JuggleError):
    """A throw whose landing cell is occupied, or a nonzero throw from a
    state with an empty first cell."""


class ParseError(JuggleError):
    """Malformed state or siteswap text."""


class InvalidPattern(JuggleError):
    """A throw sequence that does not close up into a juggling pattern."""


class ResourceLimit(JuggleError):
    """An exhaustive enumeration would exceed its configured budget."""


class CapTooSmall(JuggleError):
    """A truncation cap leaves a tail bound too large to certify the check."""


class NonTermination(JuggleError):
    """A branch of a supposedly finite process exceeded its step budget."""


class DomainError(JuggleError):
    """An argument outside the mathematical domain of a closed form."""
