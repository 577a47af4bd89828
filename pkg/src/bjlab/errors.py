"""Exception hierarchy shared by all bjlab modules."""


class BJLabError(Exception):
    """Base class for every error raised by bjlab."""


class ValidationError(BJLabError, ValueError):
    """An input failed validation."""


class NonFiniteParameterError(ValidationError):
    pass


class NonPositiveSpacingError(ValidationError):
    pass


class NegativeCouplingError(ValidationError):
    pass


class NegativeLadderError(ValidationError):
    pass


class StateIndexError(ValidationError, IndexError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class ConservationError(BJLabError, ArithmeticError):
    """Total probability drifted outside the accepted band."""

    def __init__(self, message, deviation=None, trajectory=None):
        super().__init__(message)
        self.deviation = deviation
        self.trajectory = trajectory


class NonFiniteStateError(BJLabError, ArithmeticError):
    pass


class PoleError(BJLabError, ZeroDivisionError):
    """The secular function was evaluated exactly on a dark level."""


class ConvergenceError(BJLabError, RuntimeError):
    pass


class FitError(BJLabError, ValueError):
    """Base class for decay-fit failures."""


class EmptyWindowError(FitError):
    pass


class NonPositiveValueError(FitError):
    pass


class NoDecayError(FitError):
    pass


class InsufficientSamplesError(FitError):
    pass
