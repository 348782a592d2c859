"""Physical parameters, unit conversions, pulse shapes, and single-atom dynamics.

Unit system: time in ns, rates in 1/ns, optical power as photon flux
(photons/ns). Planck's constant enters only in the SI conversion helpers
`power_to_flux` / `flux_to_power`; all inner-loop equations are written in
photon-flux units. Field amplitudes carry units of sqrt(photons/ns), so the
squared magnitude of an amplitude is a photon flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.constants import c as _SPEED_OF_LIGHT_M_S
from scipy.constants import h as _PLANCK_J_S

# Default atomic constants: excited-state lifetime 30.5 ns, forward coupling
# 0.0108 with the backward fraction a fixed 0.087 of it, probe at 852 nm.
DEFAULT_GAMMA_TOTAL = 1.0 / 30.5
DEFAULT_BETA_F = 0.0108
BETA_B_TO_BETA_F = 0.087
DEFAULT_WAVELENGTH_NM = 852.0

#: Tolerance absorbed by the density-matrix positivity check; covers
#: integrator roundoff only, not modelling error.
EPS_POSITIVITY = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Atomic and waveguide constants.

    gamma_total: total excited-state population decay rate, 1/ns.
    beta_f / beta_b: fraction of the total emission rate coupled into the
        forward / backward guided mode (dimensionless).
    wavelength: probe wavelength in nm; used only for the power <-> photon
        flux conversion at the SI boundary.
    """

    gamma_total: float = DEFAULT_GAMMA_TOTAL
    beta_f: float = DEFAULT_BETA_F
    beta_b: float = BETA_B_TO_BETA_F * DEFAULT_BETA_F
    wavelength: float = DEFAULT_WAVELENGTH_NM

    def __post_init__(self) -> None:
        if not self.gamma_total > 0:
            raise ValueError(f"gamma_total must be > 0, got {self.gamma_total}")
        if not (0.0 <= self.beta_f <= 1.0):
            raise ValueError(f"beta_f must lie in [0, 1], got {self.beta_f}")
        if not (0.0 <= self.beta_b <= 1.0):
            raise ValueError(f"beta_b must lie in [0, 1], got {self.beta_b}")
        if self.beta_f + self.beta_b > 1.0:
            raise ValueError(
                f"beta_f + beta_b must not exceed 1, got {self.beta_f + self.beta_b}"
            )
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")

    @property
    def gamma_f(self) -> float:
        """Emission rate into the forward guided mode, beta_f * gamma_total."""
        return self.beta_f * self.gamma_total

    @property
    def beta_b_ratio(self) -> float:
        """beta_b expressed as a fraction of beta_f (0 when beta_f is 0)."""
        return self.beta_b / self.beta_f if self.beta_f > 0 else 0.0

    def photon_energy_joules(self) -> float:
        return _PLANCK_J_S * _SPEED_OF_LIGHT_M_S / (self.wavelength * 1e-9)


@dataclass(frozen=True)
class AtomState:
    """Reduced single-atom state: excited population and optical coherence.

    The ground population is implicit (1 - rho_ee), so the trace is fixed to
    one by construction. `rho_ge` is the expectation value of the lowering
    operator |g><e|.
    """

    rho_ee: float
    rho_ge: complex

    def __post_init__(self) -> None:
        if not (0.0 <= self.rho_ee <= 1.0):
            raise ValueError(f"rho_ee must lie in [0, 1], got {self.rho_ee}")
        limit = self.rho_ee * (1.0 - self.rho_ee) + EPS_POSITIVITY
        if abs(self.rho_ge) ** 2 > limit:
            raise ValueError(
                f"positivity violated: |rho_ge|^2 = {abs(self.rho_ge)**2:.3e} "
                f"> rho_ee(1-rho_ee) + eps = {limit:.3e}"
            )

    @classmethod
    def ground(cls) -> "AtomState":
        return cls(0.0, 0.0j)

    @classmethod
    def excited(cls) -> "AtomState":
        return cls(1.0, 0.0j)


@dataclass(frozen=True)
class FieldAmplitude:
    """Coherent field amplitude in sqrt(photons/ns); |value|^2 is a flux."""

    value: complex

    @property
    def flux(self) -> float:
        return abs(self.value) ** 2


@dataclass(frozen=True)
class PulseShape:
    """Input pulse defined by its photon flux envelope.

    A plain rectangle when edge_time is 0 (on for t_on <= t < t_off);
    otherwise the rectangle is smoothed with raised-cosine edges of duration
    edge_time on each side, keeping the envelope continuous.
    """

    peak_flux: float
    t_on: float
    t_off: float
    edge_time: float = 0.0

    def __post_init__(self) -> None:
        if not self.t_on < self.t_off:
            raise ValueError(f"t_on must precede t_off, got [{self.t_on}, {self.t_off}]")
        if self.peak_flux < 0:
            raise ValueError(f"peak_flux must be >= 0, got {self.peak_flux}")
        if self.edge_time < 0:
            raise ValueError(f"edge_time must be >= 0, got {self.edge_time}")
        if self.edge_time > (self.t_off - self.t_on) / 2:
            raise ValueError("edge_time must not exceed half the pulse duration")

    @property
    def duration(self) -> float:
        return self.t_off - self.t_on

    @classmethod
    def rectangle(cls, peak_flux: float, duration: float) -> "PulseShape":
        """Rectangle on [-duration, 0), matching the probing convention that
        the drive switches off at t = 0."""
        return cls(peak_flux=peak_flux, t_on=-duration, t_off=0.0)

    def flux(self, t):
        """Photon flux at time(s) t, in photons/ns."""
        t = np.asarray(t, dtype=float)
        if self.edge_time == 0.0:
            out = np.where((t >= self.t_on) & (t < self.t_off), self.peak_flux, 0.0)
        else:
            e = self.edge_time
            rise = 0.5 * (1.0 - np.cos(np.pi * (t - self.t_on) / e))
            fall = 0.5 * (1.0 - np.cos(np.pi * (self.t_off - t) / e))
            out = np.select(
                [
                    t <= self.t_on,
                    t < self.t_on + e,
                    t <= self.t_off - e,
                    t < self.t_off,
                ],
                [0.0, self.peak_flux * rise, self.peak_flux, self.peak_flux * fall],
                default=0.0,
            )
        return out if out.ndim else float(out)

    def breakpoints(self) -> tuple[float, ...]:
        """Times where the envelope is not smooth (kinks of the flux)."""
        if self.edge_time == 0.0:
            return (self.t_on, self.t_off)
        e = self.edge_time
        pts = (self.t_on, self.t_on + e, self.t_off - e, self.t_off)
        return tuple(sorted(set(pts)))


class BlochDerivative(NamedTuple):
    d_rho_ee: float
    d_rho_ge: complex


def power_to_flux(power_watts: float, params: PhysicalParams) -> float:
    """Convert optical power in W to photon flux in photons/ns."""
    if power_watts < 0:
        raise ValueError(f"power must be >= 0, got {power_watts}")
    return power_watts / params.photon_energy_joules() * 1e-9


def flux_to_power(flux: float, params: PhysicalParams) -> float:
    """Convert photon flux in photons/ns back to optical power in W."""
    if flux < 0:
        raise ValueError(f"flux must be >= 0, got {flux}")
    return flux * params.photon_energy_joules() * 1e9


def rabi_frequency(flux: float, beta_f: float, gamma: float) -> float:
    """Rabi frequency sqrt(4 * beta_f * gamma * flux) in rad/ns.

    This is the drive strength experienced by an atom coupled with fraction
    beta_f to a guided field of the given photon flux.
    """
    if flux < 0 or beta_f < 0 or gamma < 0:
        raise ValueError("flux, beta_f and gamma must all be >= 0")
    return math.sqrt(4.0 * beta_f * gamma * flux)


def pulse_area(omega: float, duration: float) -> float:
    """Pulse area omega * duration (radians); exact for rectangular pulses."""
    return omega * duration


def pulse_flux(pulse: PulseShape, t):
    """Photon flux of `pulse` at time(s) t."""
    return pulse.flux(t)


def bloch_rhs(state: AtomState | tuple, omega: complex, gamma: float) -> BlochDerivative:
    """Time derivative of (rho_ee, rho_ge) for a resonantly driven, damped atom.

    Rotating frame at exact resonance. The drive enters through the complex
    Rabi frequency omega; spontaneous emission at total rate gamma damps the
    population at gamma and the coherence at gamma/2. The generator conserves
    the trace identically (the ground population is implicit).
    """
    if isinstance(state, AtomState):
        rho_ee, rho_ge = state.rho_ee, state.rho_ge
    else:
        rho_ee, rho_ge = state
    omega = complex(omega)
    d_ge = -0.5 * gamma * rho_ge - 0.5j * omega * (1.0 - 2.0 * rho_ee)
    d_ee = -gamma * rho_ee - (omega.conjugate() * rho_ge).imag
    return BlochDerivative(d_ee, d_ge)


def steady_state_rho_ee(omega: float, gamma: float) -> float:
    """Stationary excited population under constant resonant drive.

    Equals (s/2)/(1+s) with saturation parameter s = 2 omega^2 / gamma^2.
    """
    s = 2.0 * omega**2 / gamma**2
    return 0.5 * s / (1.0 + s)


def steady_state_rho_ge(omega: float, gamma: float) -> complex:
    """Stationary coherence under constant resonant drive."""
    s = 2.0 * omega**2 / gamma**2
    return -1j * (omega / gamma) / (1.0 + s)
