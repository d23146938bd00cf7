"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid experiment configuration. ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class ContractViolation(RuntimeError):
    """A numerical post-condition failed (bound violated, eigenvalue out of range, ...)."""
