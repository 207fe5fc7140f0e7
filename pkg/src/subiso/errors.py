"""Exception types shared across the package."""


class SubisoError(Exception):
    pass


class MalformedInstanceError(SubisoError, ValueError):
    pass


class MalformedConfigurationError(SubisoError, ValueError):
    pass


class UnsupportedOperationError(SubisoError):
    pass


class SizeLimitError(SubisoError):
    """Raised when an exact or brute-force routine would exceed its guard."""


class PreconditionError(SubisoError, ValueError):
    pass


class ShapeError(SubisoError, ValueError):
    pass


class ContractError(SubisoError, ValueError):
    pass


class ParameterError(SubisoError, ValueError):
    pass
