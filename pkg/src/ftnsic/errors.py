"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration detected before any simulation work starts."""


class NumericsError(RuntimeError):
    """A numerical routine failed to reach its stated tolerance."""
