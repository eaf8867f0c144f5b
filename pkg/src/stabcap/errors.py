"""Exception hierarchy shared by every module.

The CLI maps :class:`InputError` to exit code 2 and the other two to exit
code 3.
"""


class StabcapError(Exception):
    """Base class for all errors raised by this package."""


class InputError(StabcapError, ValueError):
    """Malformed arguments, out-of-range parameters, dimension mismatches."""


class CapabilityError(StabcapError):
    """The request is well-formed but not supported (missing profile, cap hit)."""


class NumericError(StabcapError, ArithmeticError):
    """Overflow, non-convergence or a violated numerical invariant."""
