"""Exception and warning types shared across the package."""


class ContractViolation(ValueError):
    """An argument violates a structural contract (wrong domain, shape, range)."""


class InvalidParameter(ValueError):
    """A numeric parameter lies outside its admissible range."""


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class QuadratureError(ArithmeticError):
    """Two successive quadrature refinements disagree beyond tolerance.

    Both estimates are kept on the exception so callers can inspect them.
    """

    def __init__(self, message, coarse, fine):
        super().__init__(f"{message} (coarse={coarse!r}, fine={fine!r})")
        self.coarse = coarse
        self.fine = fine


class SymbolEvaluationError(ArithmeticError):
    """A symbol returned a non-finite value or raised at some frequency."""

    def __init__(self, message, xi):
        super().__init__(f"{message} at xi={xi!r}")
        self.xi = xi


class AliasingWarning(RuntimeWarning):
    """Spectral mass close to the Nyquist frequency."""


class DivergenceWarning(RuntimeWarning):
    """Dyadic shell norms do not decay at the edge of the shell range."""


class AccuracyWarning(RuntimeWarning):
    """A truncated quadrature has tails that are not negligible."""


class HolderWarning(RuntimeWarning):
    """Measured local regularity is below the order asserted by the caller."""


class BoundaryAchieverWarning(RuntimeWarning):
    """The maximal function is attained at an end of the dilation grid."""
