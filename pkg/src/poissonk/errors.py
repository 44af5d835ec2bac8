"""Exception types raised by the library."""


class PoissonKError(Exception):
    """Base class for all library errors."""


class K2WithWrongK(PoissonKError, ValueError):
    """The k=2 closed form was requested for some other order."""

    def __init__(self, k):
        super().__init__(f"the K2 closed form is only valid for k=2, got k={k}")
        self.k = k


class NonPositivePolyValue(PoissonKError, ValueError):
    """A polynomial evaluated to a non-positive number at a positive rate."""


class CensusMethodError(PoissonKError, ValueError):
    """A term census was requested for an engine other than KM or Alt."""
