"""Exception hierarchy shared by the workbench modules."""


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(WorkbenchError):
    """Malformed or inconsistent input (maps to CLI exit code 1)."""


class InadmissibleMaterial(WorkbenchError):
    """Material coefficients leave the thermodynamically admissible set."""


class DomainError(WorkbenchError, ValueError):
    """Evaluation requested outside the validity domain of an expression."""


class ConvergenceError(WorkbenchError, ArithmeticError):
    """An iterative numerical method did not converge."""


class NoSolutionError(WorkbenchError):
    """A root or inversion problem has no solution on the requested branch."""


class ConstraintViolation(WorkbenchError):
    """Parameters do not satisfy the constraints of the requested family."""

    def __init__(self, message, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion


class HyperbolicityError(WorkbenchError):
    """The PDE system lost hyperbolicity, or its signal speed is unbounded."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class SolverFailure(WorkbenchError):
    """The time integrator produced non-finite values."""

    def __init__(self, message, cell=None, t=None):
        super().__init__(message)
        self.cell = cell
        self.t = t
