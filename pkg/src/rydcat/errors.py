"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A physical parameter or configuration value is out of its valid range."""


class NumericalError(ArithmeticError):
    """A computation hit a singular system or a degenerate normalization."""
