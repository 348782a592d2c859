"""Single-atom basics: unit conversions, Rabi drive, damped Bloch dynamics.

Run:  python3 demos/01_single_atom_dynamics.py
"""

import numpy as np

from cascadewg import (
    AtomState,
    PhysicalParams,
    PulseShape,
    analytic_limits,
    bloch_rhs,
    power_to_flux,
    pulse_area,
    rabi_frequency,
    steady_state_rho_ee,
)

params = PhysicalParams()
print(f"defaults: gamma = 1/{1 / params.gamma_total:.1f} ns^-1, "
      f"beta_f = {params.beta_f}, beta_b = {params.beta_b:.6f}, "
      f"wavelength = {params.wavelength} nm")

# Optical power at the fiber input becomes a photon flux; the flux, together
# with the coupling fraction, sets the Rabi frequency seen by the first atom.
for power in (20e-12, 30e-9, 60e-9):
    flux = power_to_flux(power, params)
    omega = rabi_frequency(flux, params.beta_f, params.gamma_total)
    area = pulse_area(omega, 5.0)
    print(f"P = {power:8.2e} W -> flux {flux:10.4f} photons/ns -> "
          f"A1 = {area / np.pi:6.4f} pi over a 5 ns pulse")

limits = analytic_limits(params, pulse_duration=5.0)
print(f"a resonant pi pulse carries about {limits.pi_pulse_photon_number:.0f} photons")

# Integrate one atom through a pi pulse with plain RK4 on the Bloch equations.
flux_pi = limits.pi_pulse_photon_number / 5.0
pulse = PulseShape.rectangle(flux_pi, 5.0)


def deriv(y, t):
    omega = rabi_frequency(pulse.flux(t), params.beta_f, params.gamma_total)
    d = bloch_rhs((y[0], complex(y[1], y[2])), omega, params.gamma_total)
    return np.array([d.d_rho_ee, d.d_rho_ge.real, d.d_rho_ge.imag])


dt = 0.002
y = np.zeros(3)
for i in range(round(5.0 / dt)):
    t = -5.0 + i * dt
    k1 = deriv(y, t)
    k2 = deriv(y + dt / 2 * k1, t + dt / 2)
    k3 = deriv(y + dt / 2 * k2, t + dt / 2)
    k4 = deriv(y + dt * k3, t + dt)
    y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

print(f"after the pi pulse: rho_ee = {y[0]:.4f} "
      "(slightly below 1 because the atom decays while being driven)")

# Continuous drive saturates at the textbook steady state.
for s in (0.1, 1.0, 10.0):
    omega = params.gamma_total * np.sqrt(s / 2)
    print(f"s = {s:5.1f}: steady rho_ee = {steady_state_rho_ee(omega, params.gamma_total):.4f}")
