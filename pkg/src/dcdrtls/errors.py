"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Input violates a precondition (non-finite data, dimension mismatch, ...)."""


class ConfigError(ValueError):
    """Configuration value outside its admissible range."""


class SingularMatrixError(ArithmeticError):
    """Matrix is singular or not positive-definite where required."""


class DegenerateDenominatorError(ArithmeticError):
    """A scalar denominator in a filter update is too close to zero."""


class NonGenericTlsError(ArithmeticError):
    """The minor eigenvector has a vanishing last entry; no TLS solution."""


class DivergentMomentsError(ArithmeticError):
    """Asymptotic moments requested at a forgetting factor of exactly 1."""


class IllConditionedMinorComponentWarning(UserWarning):
    """The two smallest eigenvalues are nearly equal; the minor component is
    poorly determined and inverse-power style iterations may converge slowly."""
