"""Exception hierarchy shared by all fairindex modules."""


class FairnessError(ValueError):
    """Base class for domain-constraint violations."""


class InvalidAllocation(FairnessError):
    """Allocation is empty, negative, non-finite or all zero."""


class InvalidExponent(FairnessError):
    """Generalized index exponent outside r > 1."""


class InvalidDemand(FairnessError):
    """Demand vector is malformed or has a non-positive entry."""


class InvalidTransfer(FairnessError):
    """Resource exchange would leave the giver with a negative allocation."""


class DegenerateRemainder(FairnessError):
    """All users other than the varied one hold zero, so their fair mark is 0/0."""


class InvalidParameter(FairnessError):
    """A model or distribution parameter violates its domain."""
