"""Simulator for probe pulses cascading through a waveguide-coupled atom chain.

The package propagates a coherent pulse along an ordered chain of two-level
atoms with direction-dependent coupling, integrates the driven-damped
dynamics of every atom, and extracts the transmitted / reflected power
dynamics together with collective-emission observables, from weak excitation
up to inversion. Coupling disorder is modelled by a truncated Gaussian and
averaged over Monte Carlo draws.
"""

from .cascade import (
    ChainConfig,
    LedgerReport,
    TimeGrid,
    Trace,
    energy_ledger,
    field_sweep,
    simulate,
)
from .core import (
    AtomState,
    FieldAmplitude,
    PhysicalParams,
    PulseShape,
    bloch_rhs,
    flux_to_power,
    power_to_flux,
    pulse_area,
    pulse_flux,
    rabi_frequency,
    steady_state_rho_ee,
    steady_state_rho_ge,
)
from .disorder import (
    BetaDistribution,
    RandomSeed,
    beta_draws,
    monte_carlo_average,
    sample_beta,
)
from .errors import (
    ConfigError,
    FitDomainError,
    IntegrationDiagnosticError,
    NumericalInvariantError,
    SimulationError,
)
from .observables import (
    ObservableSet,
    PulseWindows,
    absorbed_per_atom,
    compute_observables,
    emitted_per_atom,
    eta,
    excited_fraction_at_zero,
    fit_decay_constant,
)
from .oracles import (
    analytic_limits,
    fine_step_reference,
    linear_response_simulate,
)

__version__ = "0.1.0"

__all__ = [
    "AtomState",
    "BetaDistribution",
    "ChainConfig",
    "ConfigError",
    "FieldAmplitude",
    "FitDomainError",
    "IntegrationDiagnosticError",
    "LedgerReport",
    "NumericalInvariantError",
    "ObservableSet",
    "PhysicalParams",
    "PulseShape",
    "PulseWindows",
    "RandomSeed",
    "SimulationError",
    "TimeGrid",
    "Trace",
    "absorbed_per_atom",
    "analytic_limits",
    "beta_draws",
    "bloch_rhs",
    "compute_observables",
    "emitted_per_atom",
    "energy_ledger",
    "eta",
    "excited_fraction_at_zero",
    "field_sweep",
    "fine_step_reference",
    "fit_decay_constant",
    "flux_to_power",
    "linear_response_simulate",
    "monte_carlo_average",
    "power_to_flux",
    "pulse_area",
    "pulse_flux",
    "rabi_frequency",
    "sample_beta",
    "simulate",
    "steady_state_rho_ee",
    "steady_state_rho_ge",
]
