"""Figure builders for the four preset layouts.

fig2  -- transmitted-power time traces with the y-scale split at the pulse
         switch-off, overlaying the with-atoms, no-atoms, and linear-response
         series (plus an optional extra model series).
fig3  -- three stacked panels of absorbed / emitted photons and emission
         fractions versus pulse area.
fig4  -- forward emission fraction versus atom number, one curve per pulse
         area, with an optional linear-response dashed reference.
figS2 -- fig4 restricted to one pulse area, comparing the fluctuating and
         frozen-coupling tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .csvio import CsvFormatError, read_sweep, read_trace

FIGURE_IDS = ("fig2", "fig3", "fig4", "figS2")

_TRACE_ROLES = ("atoms", "reference", "linear", "model")
_ROLE_STYLE = {
    "atoms": dict(color="black", lw=1.4, label="with atoms"),
    "reference": dict(color="tab:blue", lw=1.2, label="no atoms"),
    "linear": dict(color="gray", ls="--", lw=1.2, label="linear response"),
    "model": dict(color="tab:red", lw=1.2, label="model"),
}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: tuple[Path, ...]
    output: Path
    log_y: bool = False
    log_x: bool = True
    split_at: float = 0.0  # fig2 y-rescale breakpoint

    def __post_init__(self) -> None:
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}, expected one of {FIGURE_IDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass
class RenderResult:
    figure: "plt.Figure"
    output: Path
    series: int


def _assign_trace_roles(paths: Sequence[Path]) -> dict[str, Path]:
    """Match inputs to series by filename token, falling back to position."""
    roles: dict[str, Path] = {}
    leftover = []
    for p in paths:
        stem = Path(p).stem.lower()
        for role in _TRACE_ROLES:
            if role in stem and role not in roles:
                roles[role] = Path(p)
                break
        else:
            leftover.append(Path(p))
    for role in _TRACE_ROLES:
        if role not in roles and leftover:
            roles[role] = leftover.pop(0)
    return roles


def _fig2(spec: FigureSpec) -> tuple[plt.Figure, int]:
    roles = _assign_trace_roles(spec.inputs)
    traces = {role: read_trace(path) for role, path in roles.items()}
    fig, (ax_on, ax_off) = plt.subplots(
        1, 2, figsize=(7.2, 3.4), width_ratios=[1.0, 1.6], sharey=False
    )
    t_min = min(t["t_ns"][0] for t in traces.values())
    t_max = max(t["t_ns"][-1] for t in traces.values())
    n_series = 0
    for role in _TRACE_ROLES:
        if role not in traces:
            continue
        t = traces[role]["t_ns"]
        p = traces[role]["p_f_per_ns"]
        for ax in (ax_on, ax_off):
            ax.plot(t, p, **_ROLE_STYLE[role])
        n_series += 1
    split = spec.split_at
    ax_on.set_xlim(t_min, split)
    ax_off.set_xlim(split, t_max)
    # rescaled right panel: emission is orders of magnitude below the pulse
    off_max = 0.0
    for tr in traces.values():
        mask = tr["t_ns"] >= split
        if mask.any():
            off_max = max(off_max, float(tr["p_f_per_ns"][mask].max()))
    if spec.log_y:
        for ax in (ax_on, ax_off):
            ax.set_yscale("log")
    elif off_max > 0:
        ax_off.set_ylim(0.0, 1.1 * off_max)
    ax_on.set_xlabel("t (ns)")
    ax_off.set_xlabel("t (ns)")
    ax_on.set_ylabel("forward power (photons/ns)")
    ax_off.set_title("rescaled for t > %g ns" % split, fontsize=9)
    ax_on.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    return fig, n_series


def _fig3(spec: FigureSpec) -> tuple[plt.Figure, int]:
    sweep = read_sweep(spec.inputs[0])
    x = sweep["A1_over_pi"]
    order = np.argsort(x)
    fig, axes = plt.subplots(3, 1, figsize=(5.2, 7.4), sharex=True)
    panels = [
        (("n_abs", "absorbed / atom", "-"), ("p_exc", "excited fraction", "--")),
        (("n_em_f", "forward / atom", "-"), ("n_em_b", "backward / atom", "--")),
        (("eta_f", "forward fraction", "-"), ("eta_b", "backward fraction", "--")),
    ]
    n_series = 0
    for ax, pair in zip(axes, panels):
        for name, label, ls in pair:
            ax.plot(x[order], sweep[name][order], ls, label=label)
            n_series += 1
        ax.legend(fontsize=8, frameon=False)
        if spec.log_x:
            ax.set_xscale("log")
    axes[0].set_ylabel("photons / atom")
    axes[1].set_ylabel("photons / atom")
    axes[2].set_ylabel("fraction of stored energy")
    axes[2].set_xlabel(r"pulse area $A_1/\pi$")
    fig.tight_layout()
    return fig, n_series


def _grouped_by_area(sweep: dict) -> dict[float, tuple[np.ndarray, np.ndarray]]:
    out = {}
    for area in np.unique(sweep["A1_over_pi"]):
        mask = sweep["A1_over_pi"] == area
        order = np.argsort(sweep["N"][mask])
        out[float(area)] = (sweep["N"][mask][order], sweep["eta_f"][mask][order])
    return out


def _fig4(spec: FigureSpec) -> tuple[plt.Figure, int]:
    main = read_sweep(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(5.4, 3.8))
    n_series = 0
    for area, (n, eta_f) in sorted(_grouped_by_area(main).items()):
        ax.plot(n, eta_f, "o-", ms=3, label=rf"$A_1 = {area:g}\,\pi$")
        n_series += 1
    if len(spec.inputs) > 1:
        ref = read_sweep(spec.inputs[1])
        groups = _grouped_by_area(ref)
        n, eta_f = groups[min(groups)]
        ax.plot(n, eta_f, "--", color="gray", label="linear response")
        n_series += 1
    ax.set_xlabel("atom number N")
    ax.set_ylabel(r"forward emission fraction $\eta_f$")
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    return fig, n_series


def _figs2(spec: FigureSpec) -> tuple[plt.Figure, int]:
    if len(spec.inputs) < 2:
        raise ValueError("figS2 needs the fluctuating and frozen-coupling sweep tables")
    fluct = _grouped_by_area(read_sweep(spec.inputs[0]))
    frozen = _grouped_by_area(read_sweep(spec.inputs[1]))
    # compare at the largest common area (pi in the preset tables)
    area = max(set(fluct) & set(frozen))
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    n, eta_f = fluct[area]
    ax.plot(n, eta_f, "o-", color="tab:red", ms=3, label="with coupling fluctuations")
    n, eta_f = frozen[area]
    ax.plot(n, eta_f, "s--", color="tab:green", ms=3, label="frozen coupling")
    ax.set_xlabel("atom number N")
    ax.set_ylabel(r"forward emission fraction $\eta_f$")
    ax.set_title(rf"$A_1 = {area:g}\,\pi$", fontsize=9)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    return fig, 2


_BUILDERS = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "figS2": _figs2}


def render(spec: FigureSpec) -> RenderResult:
    """Build the requested figure and write it to spec.output.

    Raises CsvFormatError (with file and line) for missing or ill-formed
    inputs; rendering never modifies them.
    """
    fig, n_series = _BUILDERS[spec.figure_id](spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    return RenderResult(figure=fig, output=out, series=n_series)
