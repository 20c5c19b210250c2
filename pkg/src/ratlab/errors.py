"""Exception hierarchy.

Every failure of a certified computation is explicit: when an interval is
too wide to decide a floor, a threshold, or a tangency, the operation raises
instead of guessing. Errors carry the step index at which they occurred so a
driver can resample or raise the working precision.
"""

from __future__ import annotations


class RatlabError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str = "", index: int | None = None):
        super().__init__(message)
        self.message = message
        self.index = index

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message, "index": self.index}

    def __str__(self) -> str:
        if self.index is None:
            return self.message
        return f"{self.message} (index {self.index})"


class PrecisionExhausted(RatlabError):
    """The enclosing interval straddles a partial-quotient boundary."""

    code = "PrecisionExhausted"


class IndexBeyondCertified(RatlabError, IndexError):
    code = "IndexBeyondCertified"


class StraddlesThreshold(RatlabError):
    """An interval comparison could not be decided."""

    code = "StraddlesThreshold"


class IntegerYBoundary(RatlabError, ValueError):
    code = "IntegerYBoundary"


class DomainViolation(RatlabError, ValueError):
    code = "DomainViolation"


class NotReduced(RatlabError, ValueError):
    code = "NotReduced"


class NoIntersectingDiscWithinCap(RatlabError):
    code = "NoIntersectingDiscWithinCap"


class InsufficientSamples(RatlabError, ValueError):
    code = "InsufficientSamples"


class ReturnNotFound(RatlabError):
    """Raised by ``return_map`` when no return happens within the cap."""

    code = "NoReturnWithinCap"
