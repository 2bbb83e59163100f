"""Exception types shared across the package."""


class FriscovError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FriscovError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class NotPSDError(DomainError):
    """A matrix that must be positive semidefinite is not, beyond tolerance."""


class DegenerateFitError(DomainError):
    """Moment matching was attempted on an input with no usable moments."""


class ConvergenceError(FriscovError, RuntimeError):
    """An iterative evaluation failed to converge within its iteration cap."""


class ConfigError(FriscovError, ValueError):
    """A configuration file failed to parse or violated a constraint.

    Carries optional line/field context for diagnostics.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"field '{field}': "
        super().__init__(prefix + message)
