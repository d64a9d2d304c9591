class ParameterError(ValueError):
    """Invalid (D, N, p, q, m) input."""


class InvariantError(ArithmeticError):
    """An internal consistency check failed; indicates a bug, not bad input."""
