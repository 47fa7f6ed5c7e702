"""Exception types raised across the package.

Every error carries a short class name that the CLI reports verbatim as the
machine-readable failure reason.
"""


class ComplementarityError(ValueError):
    """Base class for all input and consistency errors."""

    @property
    def reason(self) -> str:
        return type(self).__name__


class ZeroVector(ComplementarityError):
    pass


class NotHermitian(ComplementarityError):
    pass


class NotPositive(ComplementarityError):
    pass


class BadTrace(ComplementarityError):
    pass


class BadShape(ComplementarityError):
    pass


class ParseError(ComplementarityError):
    pass


class DomainError(ComplementarityError):
    pass


class InconsistentInputs(ComplementarityError):
    pass


class EmptyPattern(ComplementarityError):
    pass


class NegativeCorrected(ComplementarityError):
    pass


class BadRank(ComplementarityError):
    pass


class UnknownFamily(ComplementarityError):
    pass
