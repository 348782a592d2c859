"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for errors raised by the simulator."""


class ConfigError(SimulationError):
    """Invalid or inconsistent scenario configuration."""


class NumericalInvariantError(SimulationError):
    """A model invariant was violated beyond its numerical tolerance."""


class IntegrationDiagnosticError(NumericalInvariantError):
    """The integrator produced out-of-bounds state; names time and atom."""


class FitDomainError(SimulationError):
    """Fit input lies outside the domain of the fit model."""
