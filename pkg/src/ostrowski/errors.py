"""Exception types shared across the package.

Builtin OverflowError and IndexError are used directly where they fit
(convergent growth past the 63-bit budget, quotient access past an explicit
list); the classes below cover the remaining failure modes.
"""


class RangeError(ValueError):
    """An integer argument lies outside the range covered by the scale."""


class ValidationError(ValueError):
    """A digit string, spec string, or atom table violates an invariant."""


class CapError(ValueError):
    """A requested transform size exceeds the hard cap."""
