"""Exception hierarchy.

Three failure classes matter to callers (and map to CLI exit codes):
bad input, numerical degeneracy, and truncation that is too shallow for
the requested query.
"""


class FocalError(Exception):
    """Base class for library errors."""


class DegeneracyError(FocalError):
    """A computation landed within tolerance of a genuine jump or tie."""


class TruncationError(FocalError):
    """The orbit truncation is too small to answer the query exactly."""


class IncompleteDomainError(TruncationError):
    pass


class MissingZoneError(TruncationError):
    pass


class CoverStallError(TruncationError):
    """Greedy covering sweep found no admissible interval at ``stall_point``."""

    def __init__(self, stall_point: float, message: str | None = None):
        self.stall_point = stall_point
        super().__init__(message or f"covering sweep stalled at angle {stall_point:.12g}")


class DegenerateBisectorError(ValueError):
    """Bisector of a segment of (near) zero length."""


class InvalidBoundError(ValueError):
    pass


class MatchingError(ValueError):
    pass
