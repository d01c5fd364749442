"""Exception types shared across the solver."""


class ConfigurationError(ValueError):
    """Invalid or inconsistent solver configuration."""


class CapabilityError(ValueError):
    """Requested operation is not available for this equation or preset."""


class PositivityError(RuntimeError):
    """A non-physical state (negative density or pressure) was encountered."""

    def __init__(self, message, rho=None, p=None):
        super().__init__(message)
        self.rho = rho
        self.p = p


class AnalysisError(RuntimeError):
    """Stability analysis failed to produce a result."""
