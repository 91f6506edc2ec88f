"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented contract (shapes, signs, non-finite entries)."""


class DomainError(ValidationError):
    """Evaluation point lies outside the natural domain, e.g. past an MGF pole."""


class DegenerateFormError(ValidationError):
    """The form is deterministic (a = b = 0), so the requested quantity is undefined."""


class InputError(Exception):
    """Malformed input document or unreadable file (CLI exit code 1)."""


class NumericalError(RuntimeError):
    """An iterative or adaptive numerical routine failed to reach its target.

    Carries whichever diagnostic applies: `residual` for iteration residuals,
    `accuracy` for achieved quadrature error estimates.
    """

    def __init__(self, message, residual=None, accuracy=None):
        super().__init__(message)
        self.residual = residual
        self.accuracy = accuracy
