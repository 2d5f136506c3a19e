"""Exception types shared across the package.

ConfigError maps to CLI exit code 2, NumericalError and subclasses to 3.
"""


class ConfigError(ValueError):
    """Invalid configuration or input contract violation."""


class NumericalError(RuntimeError):
    """A numerical procedure failed in a detectable way."""


class SingularSystemError(NumericalError):
    """A linear system is singular or too ill-conditioned to trust."""


class MorphInversionError(NumericalError):
    """A mesh deformation inverted at least one cell."""

    def __init__(self, cell_index, message=None):
        self.cell_index = cell_index
        super().__init__(message or f"morph inverted cell {cell_index}")


class NonConvergence(NumericalError):
    """An iterative solver exhausted its budget.

    Carries the residual history of the failed run.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class DegenerateQoIError(NumericalError):
    """Quantity-of-interest denominator too close to zero."""
