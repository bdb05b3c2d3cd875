"""Exception hierarchy shared by the simulation modules and the CLI."""


class SimulationError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class ConfigurationError(SimulationError, ValueError):
    exit_code = 1


class NumericalDomainError(SimulationError, ArithmeticError):
    exit_code = 2


class IntegrationError(NumericalDomainError):
    """Step instability in a fixed-step integrator."""


class BoundaryContaminationError(SimulationError, RuntimeError):
    exit_code = 3


class ObserverError(SimulationError, RuntimeError):
    """Raised when a diagnostics callback fails during propagation."""

    exit_code = 2
