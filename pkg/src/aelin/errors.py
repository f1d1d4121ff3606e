"""Exception hierarchy.

Errors are split by what a caller can do about them: `StructuralError`
for malformed input, `PreconditionError` for a violated operation
contract, `OrbitBudgetExceeded` for boundedness that could not be
certified within the point budget (inconclusive, never "unbounded"),
and `InternalDefect` for broken internal invariants that indicate a bug
rather than bad input.
"""


class AelinError(Exception):
    """Base class for all package errors."""


class StructuralError(AelinError):
    """Malformed input: missing table entries, unknown points, bad formats."""


class PreconditionError(AelinError):
    """An operation was called outside its stated contract."""


class OrbitBudgetExceeded(AelinError):
    """Orbit enumeration hit the point budget before closing.

    Carries the base point whose orbit could not be certified bounded.
    """

    def __init__(self, point: str, message: str = ""):
        self.point = point
        super().__init__(message or f"orbit of {point!r} exceeded the point budget")


class InternalDefect(AelinError):
    """An internal invariant failed; this is a defect, not a user error."""
