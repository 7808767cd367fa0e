"""Exception hierarchy shared across the package."""


class CGError(Exception):
    """Base class for library errors."""


class ZeroVector(CGError, ValueError):
    pass


class BudgetExhausted(CGError):
    """A search that is guaranteed to succeed eventually ran out of budget."""


class UnsupportedDirection(CGError):
    """The support value in this direction is outside the supported field."""


class IrrationalFacePoint(UnsupportedDirection):
    pass


class EmptyBody(CGError, ValueError):
    pass


class Unbounded(CGError):
    """A cut system that does not bound its region was asked for vertices."""


class CertificateError(CGError, AssertionError):
    """An exact post-verification failed; indicates an internal bug."""
