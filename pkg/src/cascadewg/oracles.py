"""Independent reference implementations used to validate the main integrator.

Three routes: a linearized (classical-dipole) chain for the weak-drive
limit, a brute-force fine-step integrator with a deliberately different
discretization (sequential per-atom explicit Euler instead of synchronous
RK4), and closed-form limit values. Agreement between routes is evidence
against shared bugs, so this module must not reuse the main stepping code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _kernels
from .cascade import ChainConfig, TimeGrid, Trace
from .core import PhysicalParams

#: fine_step_reference is O(N * n_steps * refinement); keep chains small.
MAX_ORACLE_ATOMS = 32


@dataclass(frozen=True)
class LinearDipoleState:
    """Classical-dipole reduction: only the coherence evolves.

    The excited population is dropped from the drive term, so the response
    is strictly linear in the input amplitude.
    """

    rho_ge: complex


def linear_response_simulate(
    config: ChainConfig, grid: TimeGrid, store_per_atom: bool = False
) -> Trace:
    """Weak-drive limit of the cascaded chain.

    Integrates d rho_ge / dt = -(gamma/2) rho_ge - i omega_k / 2 for every
    atom (no saturation), cascades the field through the chain, and reports
    the coherent output power |alpha_out|^2 only; incoherent emission is
    second order in the excitation and dropped. Per-atom diagnostics are not
    available in this limit.
    """
    if store_per_atom:
        raise ValueError("the linear-response path has no per-atom diagnostics")
    half = grid.half_times
    flux_half = config.pulse.flux(half)
    alpha_half = np.sqrt(flux_half)
    p_f, alpha_out = _kernels.rk4_chain_linear(
        grid.n_steps,
        grid.dt,
        alpha_half,
        config.per_atom_beta_f,
        config.params.gamma_total,
    )
    n_t = grid.n_steps + 1
    return Trace(
        times=grid.times,
        p_in=np.ascontiguousarray(flux_half[::2]),
        p_f=p_f,
        p_b=np.zeros(n_t),
        sum_rho_ee=np.zeros(n_t),
        sum_beta_rho_ee=np.zeros(n_t),
        alpha_out=alpha_out,
        n_atoms=config.n_atoms,
    )


@njit(cache=True, nogil=True)
def _euler_single_atom(alpha_coarse, two_sqrt_bg, gamma, dt, refinement):
    """Explicit-Euler integration of one atom over the refined grid.

    The drive amplitude is interpolated linearly between the stored coarse
    samples. Returns the state sampled back on the coarse grid.
    """
    n_t = alpha_coarse.size
    ee_out = np.zeros(n_t)
    ge_out = np.zeros(n_t, dtype=np.complex128)
    dt_fine = dt / refinement
    ee = 0.0
    ge = 0.0 + 0.0j
    for i in range(n_t - 1):
        ee_out[i] = ee
        ge_out[i] = ge
        a_left = alpha_coarse[i]
        a_right = alpha_coarse[i + 1]
        for j in range(refinement):
            frac = j / refinement
            alpha = a_left + (a_right - a_left) * frac
            om = two_sqrt_bg * alpha
            d_ge = -0.5 * gamma * ge - 0.5j * om * (1.0 - 2.0 * ee)
            d_ee = -gamma * ee - (om.conjugate() * ge).imag
            ee += dt_fine * d_ee
            ge += dt_fine * d_ge
    ee_out[n_t - 1] = ee
    ge_out[n_t - 1] = ge
    return ee_out, ge_out


def fine_step_reference(config: ChainConfig, grid: TimeGrid, refinement: int = 100) -> Trace:
    """Brute-force cross-check of `cascade.simulate` on a small chain.

    Atoms are solved one after another: atom k is integrated over the whole
    grid (explicit Euler at dt / refinement, drive interpolated between
    coarse samples) before atom k+1 is touched. Per-atom diagnostics are
    always stored. Guarded to N <= 32 atoms.
    """
    if config.n_atoms > MAX_ORACLE_ATOMS:
        raise ValueError(
            f"fine_step_reference is limited to {MAX_ORACLE_ATOMS} atoms, "
            f"got {config.n_atoms}"
        )
    if refinement < 10:
        raise ValueError(f"refinement must be >= 10, got {refinement}")

    times = grid.times
    n_t = times.size
    n = config.n_atoms
    gamma = config.params.gamma_total
    flux_grid = config.pulse.flux(times)
    alpha = np.sqrt(flux_grid).astype(complex)

    pa_ee = np.zeros((n_t, n))
    pa_ge = np.zeros((n_t, n), dtype=complex)
    pa_alpha = np.zeros((n_t, n), dtype=complex)
    sqrt_bg = np.sqrt(config.per_atom_beta_f * gamma)

    for k in range(n):
        pa_alpha[:, k] = alpha
        ee_k, ge_k = _euler_single_atom(alpha, 2.0 * sqrt_bg[k], gamma, grid.dt, refinement)
        pa_ee[:, k] = ee_k
        pa_ge[:, k] = ge_k
        alpha = alpha - 1j * sqrt_bg[k] * ge_k

    beta_f = config.per_atom_beta_f
    p_f = flux_grid + (
        (beta_f * gamma) * pa_ee + 2.0 * sqrt_bg * np.imag(np.conj(pa_alpha) * pa_ge)
    ).sum(axis=1)
    p_b = ((config.per_atom_beta_b * gamma) * pa_ee).sum(axis=1)

    return Trace(
        times=times,
        p_in=flux_grid,
        p_f=p_f,
        p_b=p_b,
        sum_rho_ee=pa_ee.sum(axis=1),
        sum_beta_rho_ee=(beta_f * pa_ee).sum(axis=1),
        alpha_out=alpha,
        n_atoms=n,
        per_atom_rho_ee=pa_ee,
        per_atom_rho_ge=pa_ge,
        per_atom_alpha=pa_alpha,
    )


@dataclass(frozen=True)
class AnalyticLimits:
    """Closed-form reference values for a given parameter set."""

    params: PhysicalParams
    pulse_duration: float

    @property
    def pi_pulse_photon_number(self) -> float:
        """Photons in a rectangular pulse of area pi: pi^2 / (4 beta_f gamma T)."""
        denom = 4.0 * self.params.beta_f * self.params.gamma_total * self.pulse_duration
        if denom == 0.0:
            return math.inf
        return math.pi**2 / denom

    def cw_steady_state(self, omega: float) -> tuple[float, complex]:
        """Stationary (rho_ee, rho_ge) under constant resonant drive."""
        gamma = self.params.gamma_total
        s = 2.0 * omega**2 / gamma**2
        rho_ee = 0.5 * s / (1.0 + s)
        rho_ge = -1j * (omega / gamma) / (1.0 + s)
        return rho_ee, rho_ge

    def weak_cw_amplitude_transmission(self, n_atoms: int) -> float:
        """Per-chain amplitude transfer (1 - 2 beta_f)^N in the linear limit."""
        return (1.0 - 2.0 * self.params.beta_f) ** n_atoms

    def weak_cw_power_transmission(self, n_atoms: int) -> float:
        return self.weak_cw_amplitude_transmission(n_atoms) ** 2


def analytic_limits(params: PhysicalParams, pulse_duration: float = 5.0) -> AnalyticLimits:
    """Reference values derived by hand from the model equations."""
    return AnalyticLimits(params=params, pulse_duration=pulse_duration)
