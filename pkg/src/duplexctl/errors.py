"""Exception types raised by the parsers and metric routines.

Every error derives from :class:`DuplexError` (itself a ``ValueError``), so
callers that only care about "bad input" can catch one class. The CLI prints
the class name on stderr, which is why the names are kept short and stable.
"""


class DuplexError(ValueError):
    """Base class for all input/validation errors in this package."""


# ingestion
class MissingOptionLine(DuplexError):
    pass


class UnsupportedParameter(DuplexError):
    pass


class MalformedRow(DuplexError):
    pass


class NonUniformGrid(DuplexError):
    pass


class BadHeader(DuplexError):
    pass


# metrics
class AllZeroResponse(DuplexError):
    pass


class ZeroTotalPower(DuplexError):
    pass


class ZeroWindowPower(DuplexError):
    pass


class NonPositiveBandwidth(DuplexError):
    pass


# capacity
class NegativePower(DuplexError):
    pass


class DegenerateChannel(DuplexError):
    pass


# rates
class NonPositiveEvm(DuplexError):
    pass
