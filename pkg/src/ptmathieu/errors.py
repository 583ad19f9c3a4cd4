"""Exception and warning types raised by the package."""


class ParameterError(ValueError):
    """A parameter lies outside the domain of an operation."""


class NonFiniteError(ArithmeticError):
    """Integration overflowed before reaching the end of the period."""

    def __init__(self, x, message=None):
        self.x = float(x)
        super().__init__(message or f"solution overflowed at x = {self.x:.6g}")


class NotSymmetrizableError(ValueError):
    """Hill matrix couplings have a non-positive product (beta >= 1)."""


class NoBracketError(ValueError):
    """No sign change of the discriminant residual inside the search window."""


class InsufficientSamplesError(ValueError):
    pass


class TongueClosedError(RuntimeError):
    """Tracing stopped because no edge could be bracketed.

    ``curve`` holds the samples accepted before the failure.
    """

    def __init__(self, curve, eps):
        self.curve = curve
        self.eps = float(eps)
        super().__init__(f"tongue closed or lost at eps = {self.eps:.6g}")


class TruncationWarning(UserWarning):
    """Requested Hill eigenvalues are too close to the truncation limit."""


class VerificationError(ArithmeticError):
    """An accepted root failed its re-check at a finer step size."""
