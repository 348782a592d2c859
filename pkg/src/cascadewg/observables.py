"""Derived quantities extracted from simulated traces.

Photon numbers are trapezoidal integrals of the sampled powers over the
absorption window (while the pulse is on) and the emission window (after the
pulse), normalized per atom. Emission fractions relate the re-emitted to the
absorbed photon number, and the decay constant comes from a log-linear fit
of the forward power tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import trapezoid

from .cascade import TimeGrid, Trace
from .core import PulseShape
from .errors import FitDomainError, NumericalInvariantError

#: Interval, in ns after the pulse, over which the decay constant is fitted.
#: It skips the immediate post-pulse transient and the late subradiant tail.
DEFAULT_FIT_WINDOW = (5.0, 25.0)

_ETA_ILL_CONDITIONED = 1e-6


@dataclass(frozen=True)
class PulseWindows:
    """Integration windows: absorb while the pulse is on, emit afterwards."""

    absorb: tuple[float, float]
    emit: tuple[float, float]

    def __post_init__(self) -> None:
        if not self.absorb[0] < self.absorb[1]:
            raise ValueError(f"empty absorb window {self.absorb}")
        if not self.emit[0] < self.emit[1]:
            raise ValueError(f"empty emit window {self.emit}")

    @classmethod
    def from_pulse_and_grid(cls, pulse: PulseShape, grid: TimeGrid) -> "PulseWindows":
        if pulse.t_on < grid.t_start or pulse.t_off > grid.t_end:
            raise ValueError("pulse lies outside the grid")
        return cls(absorb=(pulse.t_on, pulse.t_off), emit=(pulse.t_off, grid.t_end))


class EtaResult(NamedTuple):
    value: float
    ill_conditioned: bool


@dataclass(frozen=True)
class ObservableSet:
    """Per-atom photon bookkeeping for one run or sweep point.

    n_abs / n_em_f / n_em_b: photons per atom absorbed from the pulse and
    re-emitted into the forward / backward guided mode; eta_f / eta_b: the
    corresponding fractions of the stored energy; p_exc: mean excited
    population right at pulse switch-off; tau_ns: fitted decay constant
    (NaN when the fit was skipped).
    """

    n_abs: float
    n_em_f: float
    n_em_b: float
    eta_f: float
    eta_b: float
    p_exc: float
    tau_ns: float = math.nan
    flags: tuple[str, ...] = ()

    def check(self, eps: float = 1e-6) -> "ObservableSet":
        """Validate the energy bookkeeping; raises on violation."""
        for name in ("n_abs", "n_em_f", "n_em_b", "eta_f", "eta_b", "p_exc"):
            if getattr(self, name) < -eps:
                raise NumericalInvariantError(f"{name} is negative: {getattr(self, name)}")
        if self.eta_f + self.eta_b > 1.0 + eps:
            raise NumericalInvariantError(
                f"eta_f + eta_b = {self.eta_f + self.eta_b} exceeds 1"
            )
        if self.n_em_f + self.n_em_b > self.n_abs + eps:
            raise NumericalInvariantError(
                "guided emission exceeds absorption: "
                f"{self.n_em_f + self.n_em_b} > {self.n_abs}"
            )
        return self


def _window_slice(times: np.ndarray, window: tuple[float, float]) -> slice:
    dt = times[1] - times[0]
    i0 = int(round((window[0] - times[0]) / dt))
    i1 = int(round((window[1] - times[0]) / dt))
    if i0 < 0 or i1 > times.size - 1 or i0 >= i1:
        raise ValueError(f"window {window} does not fit the trace grid")
    for i, t in ((i0, window[0]), (i1, window[1])):
        if abs(times[i] - t) > 1e-6:
            raise ValueError(f"window edge {t} is not on the trace grid")
    return slice(i0, i1 + 1)


def absorbed_per_atom(trace: Trace, windows: PulseWindows, n_atoms: int) -> float:
    """Photons absorbed from the pulse per atom: integral of p_in - p_f."""
    if n_atoms <= 0:
        raise ValueError("per-atom absorption is undefined for an empty chain")
    sl = _window_slice(trace.times, windows.absorb)
    return float(trapezoid(trace.p_in[sl] - trace.p_f[sl], trace.times[sl])) / n_atoms


def emitted_per_atom(
    trace: Trace,
    windows: PulseWindows,
    n_atoms: int,
    direction: str = "forward",
    window: str = "emit",
) -> float:
    """Photons emitted per atom into the forward or backward guided mode.

    The headline value integrates over the post-pulse emit window; pass
    window="absorb" for the during-pulse diagnostic.
    """
    if n_atoms <= 0:
        raise ValueError("per-atom emission is undefined for an empty chain")
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    if window not in ("emit", "absorb"):
        raise ValueError(f"window must be emit or absorb, got {window!r}")
    power = trace.p_f if direction == "forward" else trace.p_b
    sl = _window_slice(trace.times, windows.emit if window == "emit" else windows.absorb)
    return float(trapezoid(power[sl], trace.times[sl])) / n_atoms


def eta(n_em: float, n_abs: float) -> EtaResult:
    """Fraction of the stored energy re-emitted into one guided mode."""
    if n_abs == 0:
        raise ValueError("eta is undefined for n_abs = 0")
    return EtaResult(n_em / n_abs, n_abs < _ETA_ILL_CONDITIONED)


def excited_fraction_at_zero(trace: Trace, n_atoms: int) -> float:
    """Mean excited population at the t = 0 grid point (pulse switch-off)."""
    if n_atoms <= 0:
        raise ValueError("excited fraction is undefined for an empty chain")
    dt = trace.times[1] - trace.times[0]
    i0 = int(round((0.0 - trace.times[0]) / dt))
    if i0 < 0 or i0 >= trace.times.size or abs(trace.times[i0]) > 1e-6:
        raise ValueError("trace grid does not contain t = 0")
    return float(trace.sum_rho_ee[i0]) / n_atoms


@dataclass(frozen=True)
class DecayFit:
    tau_ns: float
    log_slope: float
    log_intercept: float
    residual_rms: float
    window: tuple[float, float]


def fit_decay_constant(
    trace: Trace, fit_window: tuple[float, float] = DEFAULT_FIT_WINDOW
) -> DecayFit:
    """Least-squares line through log p_f over the fit window; tau = -1/slope."""
    sl = _window_slice(trace.times, fit_window)
    t = trace.times[sl]
    p = trace.p_f[sl]
    if np.any(p <= 0.0):
        raise FitDomainError(
            f"p_f is not strictly positive over the fit window {fit_window}"
        )
    logp = np.log(p)
    slope, intercept = np.polyfit(t, logp, 1)
    if slope >= 0:
        raise FitDomainError("forward power does not decay over the fit window")
    resid = logp - (slope * t + intercept)
    return DecayFit(
        tau_ns=-1.0 / slope,
        log_slope=float(slope),
        log_intercept=float(intercept),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        window=fit_window,
    )


def compute_observables(
    trace: Trace,
    windows: PulseWindows,
    n_atoms: int,
    fit_window: Optional[tuple[float, float]] = DEFAULT_FIT_WINDOW,
) -> ObservableSet:
    """Assemble the full observable set for one trace.

    The decay fit is optional (fit_window=None skips it) and a failed fit is
    recorded as a flag rather than an error, so sweeps degrade gracefully.
    """
    n_abs = absorbed_per_atom(trace, windows, n_atoms)
    n_em_f = emitted_per_atom(trace, windows, n_atoms, "forward")
    n_em_b = emitted_per_atom(trace, windows, n_atoms, "backward")
    flags: list[str] = []
    eta_f = eta(n_em_f, n_abs)
    eta_b = eta(n_em_b, n_abs)
    if eta_f.ill_conditioned:
        flags.append("eta-ill-conditioned")
    tau = math.nan
    if fit_window is not None:
        try:
            tau = fit_decay_constant(trace, fit_window).tau_ns
        except (FitDomainError, ValueError):
            # non-decaying signal, or the window does not fit this grid
            flags.append("decay-fit-skipped")
    return ObservableSet(
        n_abs=n_abs,
        n_em_f=n_em_f,
        n_em_b=n_em_b,
        eta_f=eta_f.value,
        eta_b=eta_b.value,
        p_exc=excited_fraction_at_zero(trace, n_atoms),
        tau_ns=tau,
        flags=tuple(flags),
    )
