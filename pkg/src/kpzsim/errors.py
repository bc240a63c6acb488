"""Exception types shared across the package."""


class KpzsimError(Exception):
    """Base class for all package-specific errors."""


class NonStochasticError(KpzsimError):
    """A vertex weight table left [0, 1] beyond the admitted rounding slack."""


class NonTerminatingError(KpzsimError):
    """A horizontal sweep exceeded the hard column cap (diagnostic only)."""


class CutoffViolatedError(KpzsimError):
    """A current was requested too close to the truncated edge of the window."""


class InfeasibleContourError(KpzsimError):
    """No circle family satisfies the nesting/exclusion constraints."""


class NotConvergedError(KpzsimError):
    """Node doubling kept moving the value beyond the requested tolerance."""


class TailTooLargeError(KpzsimError):
    """The q-Laplace series tail bound exceeds the requested tolerance."""


class SizeLimitError(KpzsimError):
    """Exhaustive enumeration exceeded its node budget."""


class InvalidShiftError(KpzsimError):
    """The contour shift E does not clear every pole -c_j."""
