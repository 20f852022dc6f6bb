class DataValidationError(ValueError):
    """Input data, codebook or configuration failed validation."""


class NumericalError(ArithmeticError):
    """A numerical routine could not produce a valid result."""
