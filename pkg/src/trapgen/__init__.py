"""Optical trap arrays from phase-contrast imaging of aperture masks."""
from .errors import (AliasingError, GeometryError, InfeasibleBalance, InvalidArgument,
                     InvalidProfile, NumericalFailure, RangeError, ResolutionError,
                     SingularCondition, TrapgenError)

__version__ = "0.1.0"

__all__ = [
    "__version__", "TrapgenError", "InvalidArgument", "GeometryError", "ResolutionError",
    "AliasingError", "NumericalFailure", "SingularCondition", "InfeasibleBalance",
    "RangeError", "InvalidProfile",
]
