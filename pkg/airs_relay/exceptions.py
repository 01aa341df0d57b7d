class InvalidInputError(ValueError):
    """Raised when a caller passes values outside the documented domain."""
