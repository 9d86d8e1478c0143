"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Input lies outside an operation's mathematical domain."""


class NumericError(RuntimeError):
    """A numerical procedure failed to converge or produced non-finite data."""


class TruncationWarning(UserWarning):
    """Significant coefficient mass sits in the top Fourier modes."""


class SupportWarning(UserWarning):
    """A function is not negligible on the boundary of an integration box."""
