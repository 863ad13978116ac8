"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class SingularSystemError(ValueError):
    """A linear system cannot be solved because its matrix is singular."""


class DegenerateCentersError(ValueError):
    """The center set is not unisolvent for the requested polynomial degree."""


class StabilityParameterError(ValueError):
    """A penalty or boundary parameter violates its stability bound."""


class ConfigurationError(ValueError):
    """A run configuration violates a documented precondition."""


class CorrectionBuildError(RuntimeError):
    """The correction-function system could not be solved."""

    def __init__(self, message: str, cond: float = float("nan")):
        super().__init__(message)
        self.cond = cond
