"""Exception types shared across the library."""


class ShellError(Exception):
    """Base class for all library-specific errors."""


class DomainError(ShellError, ValueError):
    """Input outside a chart parameter domain or a validity bound."""


class UnsupportedError(ShellError, ValueError):
    """Operation not defined for the given chart combination."""


class MeshError(ShellError, ValueError):
    """Invalid mesh request or degenerate element geometry."""


class AssemblyError(ShellError, ValueError):
    """Quadrature/element failure during form assembly."""


class SolverError(ShellError, RuntimeError):
    """Eigensolver did not converge; carries the last Ritz value."""

    def __init__(self, message, last_value=None):
        super().__init__(message)
        self.last_value = last_value


class ConfigurationError(ShellError, ValueError):
    """Ill-posed solver setup (e.g. indefinite denominator form)."""


class ResolutionError(ShellError, ValueError):
    """Quadrature resolution insufficient for the requested accuracy."""


class DataError(ShellError, ValueError):
    """Invalid data handed to a fitting or reporting routine."""
