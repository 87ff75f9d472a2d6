"""Coherent and incoherent quantum homogenizer collision models."""
__version__ = "0.1.0"

from swapcm.errors import (  # noqa: E402
    ConfigError,
    DimensionMismatchError,
    NonUnitaryError,
    RegisterLayoutError,
    SwapCMError,
    UnphysicalStateError,
)
from swapcm.qcore import BlochVector, DensityMatrix, PureState  # noqa: E402

__all__ = [
    "BlochVector", "ConfigError", "DensityMatrix", "DimensionMismatchError", "NonUnitaryError", "PureState",
    "RegisterLayoutError", "SwapCMError", "UnphysicalStateError", "__version__",
]
