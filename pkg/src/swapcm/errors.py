"""Exception types raised by swapcm."""


class SwapCMError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(SwapCMError, ValueError):
    """Operands have incompatible Hilbert-space dimensions."""


class RegisterLayoutError(SwapCMError, ValueError):
    """Qubit indices do not fit the register (out of range, repeated, empty)."""


class UnphysicalStateError(SwapCMError, ValueError):
    """A state violates Hermiticity, normalization or positivity."""


class NonUnitaryError(SwapCMError, ValueError):
    """An operator expected to be unitary is not."""


class ConfigError(SwapCMError, ValueError):
    """A configuration file could not be parsed or validated."""
