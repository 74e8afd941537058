"""Error hierarchy shared by the whole toolkit.

Each class maps to a distinct CLI exit code so that callers can tell a bad
input from a truncation shortfall from a broken internal law.
"""


class RatliffRushError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ValidationError(RatliffRushError):
    """Malformed input: bad presentation, unparsable monomial, ambient mismatch."""

    exit_code = 2


class HorizonError(RatliffRushError):
    """A computation needed degrees beyond the truncation horizon.

    The fix is always the same: rebuild the ring with a larger truncation.
    """

    exit_code = 3


class InternalCheckError(RatliffRushError):
    """A law known to hold (e.g. the involution) failed: engine bug or horizon lie."""

    exit_code = 4
