"""Exception types shared across the package."""


class CayleyGapError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(CayleyGapError, ValueError):
    """Malformed graph, group, subgroup or configuration data."""


class NotIrreducibleError(CayleyGapError):
    """The chain (or weighted group) is not irreducible."""


class NotReversibleError(CayleyGapError):
    """No detailed-balance measure exists."""


class CapExceededError(CayleyGapError):
    """A state space or group closure grew beyond its configured cap."""


class NumericalError(CayleyGapError):
    """An eigendecomposition produced a result outside tolerance."""


class NotRegularError(CayleyGapError):
    """A subgroup pair fails the regularity condition for quotients."""
