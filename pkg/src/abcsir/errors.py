"""Package-wide exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AccuracyError(ArithmeticError):
    """Internal convergence diagnostics failed; the result would be unreliable."""


class InstabilityError(RuntimeError):
    """A marching solution exceeded its configured magnitude bound."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class PositivityBudgetError(RuntimeError):
    """Clipped negative mass exceeded the configured budget."""

    def __init__(self, message, step=None, clipped_mass=None):
        super().__init__(message)
        self.step = step
        self.clipped_mass = clipped_mass


class ConfigError(ValueError):
    """A scenario configuration violates an invariant."""
