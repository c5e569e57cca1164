"""Exception hierarchy shared by all trapgen modules."""


class TrapgenError(Exception):
    """Base class for toolkit errors."""


class InvalidArgument(TrapgenError, ValueError):
    pass


class GeometryError(TrapgenError, ValueError):
    """A grid, aperture, or filter does not fit the sampled geometry."""


class ResolutionError(GeometryError):
    """Apertures are undersampled; carries the pitch that would be required."""

    def __init__(self, message, required_pitch=None):
        super().__init__(message)
        self.required_pitch = required_pitch


class AliasingError(GeometryError):
    def __init__(self, message, max_safe_extent=None):
        super().__init__(message)
        self.max_safe_extent = max_safe_extent


class NumericalFailure(TrapgenError, ArithmeticError):
    """Series, quadrature, or fit failed to converge."""


class SingularCondition(NumericalFailure):
    pass


class InfeasibleBalance(TrapgenError, ValueError):
    pass


class RangeError(TrapgenError, ValueError):
    pass


class InvalidProfile(TrapgenError, ValueError):
    pass
