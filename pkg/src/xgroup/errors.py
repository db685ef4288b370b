"""Exception types shared across the package."""


class XGroupError(Exception):
    """Base class for all package errors."""


class CapExceeded(XGroupError):
    """A size cap (closure, brute check, enumeration, ...) was exceeded."""


class InvalidPermutation(XGroupError):
    """Permutation images are not a bijection on the point set."""


class InvalidParameter(XGroupError):
    """A constructor was called with parameters outside its domain."""


class ConstraintViolation(XGroupError):
    """An arithmetic precondition of a construction fails.

    `condition` names the violated condition so the CLI can cite it.
    """

    def __init__(self, message: str, condition: str = ""):
        super().__init__(message)
        self.condition = condition or message


class SearchFailed(XGroupError):
    """A bounded embedding search ran out of candidates."""


class NotNormal(XGroupError):
    """Quotient requested by a non-normal subgroup."""


class InternalInvariantViolation(XGroupError):
    """An engine self-check failed; indicates a bug, not bad input."""


class Unclassified(XGroupError):
    """The group matches no case and is too large for a brute witness."""


class ParseError(XGroupError):
    """A group description document is malformed."""
