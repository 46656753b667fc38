"""Exception types shared by the engines and the command line."""


class DupDistError(Exception):
    """Base class for all library errors."""


class InvalidInput(DupDistError, ValueError):
    """A sequence or parameter is outside an operation's domain."""


class InvalidStep(DupDistError, ValueError):
    """A deduplication step does not match a (beta-)repeat in the sequence."""

    def __init__(self, i: int, h: int, distance: int | None, budget: int, index: int | None = None):
        self.i = i
        self.h = h
        self.distance = distance
        self.budget = budget
        self.index = index
        where = "" if index is None else f"step {index}: "
        if distance is None:
            msg = f"{where}({i},{h}) does not fit in the sequence"
        else:
            msg = f"{where}({i},{h}) has Hamming distance {distance} > budget {budget}"
        super().__init__(msg)


class CapExceeded(DupDistError, ValueError):
    """Requested size is beyond what an engine is configured to handle."""


class TableOverflow(DupDistError):
    """A distance value does not fit in the 4-bit cache cell."""


class CacheError(DupDistError):
    """Cache file is unreadable, truncated or has the wrong header."""
