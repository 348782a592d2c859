"""Compiled inner loops for the chain integrator.

The chain state is held as two flat arrays (excited populations, coherences)
and advanced with classic fixed-step RK4. Every RK stage re-evaluates the
field cascade so each atom is driven by the same-stage upstream coherences;
propagation delay between atoms is neglected.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Violation codes reported by the kernels.
VIOLATION_NONE = 0
VIOLATION_RHO_EE_LOW = 1
VIOLATION_RHO_EE_HIGH = 2
VIOLATION_POSITIVITY = 3
VIOLATION_P_F_NEGATIVE = 4


@njit(cache=True, nogil=True)
def _cascade_derivs(ee, ge, alpha_in, sqrt_bg, gamma, d_ee, d_ge):
    """Sweep the field left to right and fill the state derivatives.

    Returns the output amplitude behind the last atom. `sqrt_bg` holds
    sqrt(beta_f_k * gamma) per atom; the local Rabi frequency is
    2 * sqrt_bg[k] * alpha_k.
    """
    alpha = alpha_in + 0.0j
    for k in range(ee.shape[0]):
        om = 2.0 * sqrt_bg[k] * alpha
        d_ge[k] = -0.5 * gamma * ge[k] - 0.5j * om * (1.0 - 2.0 * ee[k])
        d_ee[k] = -gamma * ee[k] - (om.conjugate() * ge[k]).imag
        alpha = alpha - 1j * sqrt_bg[k] * ge[k]
    return alpha


@njit(cache=True, nogil=True)
def rk4_chain(
    n_steps,
    dt,
    alpha_half,
    flux_grid,
    beta_f,
    beta_b,
    gamma,
    eps,
    store_per_atom,
):
    """Integrate the full chain over the grid and sample the outputs.

    alpha_half: input field amplitude at the half-step grid (2*n_steps + 1
        samples), real-valued sqrt flux.
    flux_grid: input photon flux at the output grid points (n_steps + 1).
    eps: numerical tolerance for the state-invariant checks.

    Returns the sampled outputs plus the first invariant violation as
    (code, step index, atom index); code 0 means none. On violation the
    integration stops and the remaining samples are left at zero.
    """
    n = beta_f.size
    n_t = n_steps + 1
    sqrt_bg = np.sqrt(beta_f * gamma)
    bf_g = beta_f * gamma
    bb_g = beta_b * gamma

    ee = np.zeros(n)
    ge = np.zeros(n, dtype=np.complex128)
    k1e = np.empty(n)
    k2e = np.empty(n)
    k3e = np.empty(n)
    k4e = np.empty(n)
    k1g = np.empty(n, dtype=np.complex128)
    k2g = np.empty(n, dtype=np.complex128)
    k3g = np.empty(n, dtype=np.complex128)
    k4g = np.empty(n, dtype=np.complex128)
    tmp_e = np.empty(n)
    tmp_g = np.empty(n, dtype=np.complex128)

    p_f = np.zeros(n_t)
    p_b = np.zeros(n_t)
    sum_ee = np.zeros(n_t)
    sum_bee = np.zeros(n_t)
    alpha_out = np.zeros(n_t, dtype=np.complex128)

    if store_per_atom:
        pa_ee = np.zeros((n_t, n))
        pa_ge = np.zeros((n_t, n), dtype=np.complex128)
        pa_alpha = np.zeros((n_t, n), dtype=np.complex128)
    else:
        pa_ee = np.zeros((0, 0))
        pa_ge = np.zeros((0, 0), dtype=np.complex128)
        pa_alpha = np.zeros((0, 0), dtype=np.complex128)

    viol_code = VIOLATION_NONE
    viol_step = -1
    viol_atom = -1

    for i in range(n_t):
        # Sample outputs at the grid point and evaluate the first RK stage in
        # the same cascade sweep; both need the state exactly at (t_i, y_i).
        a0 = alpha_half[2 * i]
        alpha = a0 + 0.0j
        pf = flux_grid[i]
        pb = 0.0
        see = 0.0
        sbee = 0.0
        for k in range(n):
            e = ee[k]
            g = ge[k]
            if viol_code == VIOLATION_NONE:
                if e < -eps:
                    viol_code = VIOLATION_RHO_EE_LOW
                    viol_step = i
                    viol_atom = k
                elif e > 1.0 + eps:
                    viol_code = VIOLATION_RHO_EE_HIGH
                    viol_step = i
                    viol_atom = k
                elif g.real * g.real + g.imag * g.imag > e * (1.0 - e) + eps:
                    viol_code = VIOLATION_POSITIVITY
                    viol_step = i
                    viol_atom = k
            if store_per_atom:
                pa_ee[i, k] = e
                pa_ge[i, k] = g
                pa_alpha[i, k] = alpha
            pf += bf_g[k] * e + 2.0 * sqrt_bg[k] * (alpha.conjugate() * g).imag
            pb += bb_g[k] * e
            see += e
            sbee += beta_f[k] * e
            om = 2.0 * sqrt_bg[k] * alpha
            k1g[k] = -0.5 * gamma * g - 0.5j * om * (1.0 - 2.0 * e)
            k1e[k] = -gamma * e - (om.conjugate() * g).imag
            alpha = alpha - 1j * sqrt_bg[k] * g
        p_f[i] = pf
        p_b[i] = pb
        sum_ee[i] = see
        sum_bee[i] = sbee
        alpha_out[i] = alpha
        if viol_code == VIOLATION_NONE and pf < -eps:
            viol_code = VIOLATION_P_F_NEGATIVE
            viol_step = i
            viol_atom = -1
        if viol_code != VIOLATION_NONE:
            break
        if i == n_steps:
            break

        a1 = alpha_half[2 * i + 1]
        a2 = alpha_half[2 * i + 2]
        for k in range(n):
            tmp_e[k] = ee[k] + 0.5 * dt * k1e[k]
            tmp_g[k] = ge[k] + 0.5 * dt * k1g[k]
        _cascade_derivs(tmp_e, tmp_g, a1, sqrt_bg, gamma, k2e, k2g)
        for k in range(n):
            tmp_e[k] = ee[k] + 0.5 * dt * k2e[k]
            tmp_g[k] = ge[k] + 0.5 * dt * k2g[k]
        _cascade_derivs(tmp_e, tmp_g, a1, sqrt_bg, gamma, k3e, k3g)
        for k in range(n):
            tmp_e[k] = ee[k] + dt * k3e[k]
            tmp_g[k] = ge[k] + dt * k3g[k]
        _cascade_derivs(tmp_e, tmp_g, a2, sqrt_bg, gamma, k4e, k4g)
        sixth = dt / 6.0
        for k in range(n):
            ee[k] += sixth * (k1e[k] + 2.0 * (k2e[k] + k3e[k]) + k4e[k])
            ge[k] += sixth * (k1g[k] + 2.0 * (k2g[k] + k3g[k]) + k4g[k])

    return (
        p_f,
        p_b,
        sum_ee,
        sum_bee,
        alpha_out,
        pa_ee,
        pa_ge,
        pa_alpha,
        viol_code,
        viol_step,
        viol_atom,
    )


@njit(cache=True, nogil=True)
def _linear_derivs(ge, alpha_in, sqrt_bg, gamma, d_ge):
    """Cascade sweep for the linearized (classical-dipole) chain."""
    alpha = alpha_in + 0.0j
    for k in range(ge.shape[0]):
        om = 2.0 * sqrt_bg[k] * alpha
        d_ge[k] = -0.5 * gamma * ge[k] - 0.5j * om
        alpha = alpha - 1j * sqrt_bg[k] * ge[k]
    return alpha


@njit(cache=True, nogil=True)
def rk4_chain_linear(n_steps, dt, alpha_half, beta_f, gamma):
    """Linear-response companion of `rk4_chain`.

    Saturation is dropped from the drive term and only the coherent output
    power |alpha_out|^2 is reported; incoherent emission is second order in
    the excitation and absent in this limit.
    """
    n = beta_f.size
    n_t = n_steps + 1
    sqrt_bg = np.sqrt(beta_f * gamma)

    ge = np.zeros(n, dtype=np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)

    p_f = np.zeros(n_t)
    alpha_out = np.zeros(n_t, dtype=np.complex128)

    for i in range(n_t):
        a0 = alpha_half[2 * i]
        alpha = a0 + 0.0j
        for k in range(n):
            alpha = alpha - 1j * sqrt_bg[k] * ge[k]
        alpha_out[i] = alpha
        p_f[i] = alpha.real * alpha.real + alpha.imag * alpha.imag
        if i == n_steps:
            break

        a1 = alpha_half[2 * i + 1]
        a2 = alpha_half[2 * i + 2]
        _linear_derivs(ge, a0, sqrt_bg, gamma, k1)
        for k in range(n):
            tmp[k] = ge[k] + 0.5 * dt * k1[k]
        _linear_derivs(tmp, a1, sqrt_bg, gamma, k2)
        for k in range(n):
            tmp[k] = ge[k] + 0.5 * dt * k2[k]
        _linear_derivs(tmp, a1, sqrt_bg, gamma, k3)
        for k in range(n):
            tmp[k] = ge[k] + dt * k3[k]
        _linear_derivs(tmp, a2, sqrt_bg, gamma, k4)
        sixth = dt / 6.0
        for k in range(n):
            ge[k] += sixth * (k1[k] + 2.0 * (k2[k] + k3[k]) + k4[k])

    return p_f, alpha_out
