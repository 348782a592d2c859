"""Coupling-strength disorder and Monte Carlo averaging.

Thermal motion modulates each atom's distance to the waveguide, so the
forward coupling fraction is drawn per atom from a Gaussian truncated at
zero. Draw streams are counter-based (Philox) and keyed by (seed,
sample index), which makes every sample reproducible on any platform and
lets samples run in parallel without coordination.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import cascade
from .cascade import ChainConfig, TimeGrid, Trace
from .core import PhysicalParams, PulseShape
from .errors import SimulationError

#: Disorder model parameters fitted to transmission data: mean and standard
#: deviation of the untruncated Gaussian before the cut at zero.
DEFAULT_BETA_MEAN = 0.0108
DEFAULT_BETA_SIGMA = 0.0065

#: Number of disorder realizations averaged per prediction.
DEFAULT_N_SAMPLES = 100

_BATCH = 256  # fixed proposal batch so draw prefixes are size-independent

THREADS_ENV_VAR = "CASCADEWG_THREADS"


@dataclass(frozen=True)
class BetaDistribution:
    """Gaussian over beta_f truncated at zero and renormalized.

    mean and sigma parameterize the untruncated Gaussian; samples are the
    accepted proposals >= 0. sigma = 0 degenerates to the constant mean.
    """

    mean: float
    sigma: float
    lower_cut: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.mean <= 0 and self.sigma <= 0:
            raise ValueError("require mean > 0 or sigma > 0")
        if self.lower_cut != 0.0:
            raise ValueError("the truncation point is fixed at 0")

    def pdf(self, x):
        """Normalized truncated density (zero below the cut)."""
        x = np.asarray(x, dtype=float)
        if self.sigma == 0:
            raise ValueError("degenerate distribution has no density")
        z = (x - self.mean) / self.sigma
        norm = 1.0 - _gauss_cdf(-self.mean / self.sigma)
        out = np.where(
            x >= 0.0,
            np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi) * norm),
            0.0,
        )
        return out if out.ndim else float(out)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        values, _ = self.sample_with_proposal_count(rng, 1 if size is None else size)
        return float(values[0]) if size is None else values

    def sample_with_proposal_count(
        self, rng: np.random.Generator, size: int
    ) -> tuple[np.ndarray, int]:
        """Draw `size` values by rejection; also report proposals consumed.

        Proposals are taken in fixed-size batches so that the accepted
        sequence is a prefix-stable function of the underlying stream: the
        first n draws are identical no matter how many are requested.
        """
        if self.sigma == 0.0:
            if self.mean < 0:
                raise ValueError("degenerate distribution requires mean >= 0")
            return np.full(size, self.mean), size
        if size == 0:
            return np.empty(0), 0
        accepted: list[np.ndarray] = []
        n_accepted = 0
        n_proposals = 0
        while n_accepted < size:
            z = rng.normal(self.mean, self.sigma, _BATCH)
            n_proposals += _BATCH
            keep = z[z >= self.lower_cut]
            accepted.append(keep)
            n_accepted += keep.size
        values = np.concatenate(accepted)[:size]
        return values, n_proposals


def _gauss_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


@dataclass(frozen=True)
class RandomSeed:
    """Addressable draw stream: a base seed plus a sample index.

    Identical (seed, sample_index) pairs reproduce identical sequences on
    every platform; distinct sample indices select non-overlapping Philox
    sub-streams via the generator's jump construction.
    """

    seed: int
    sample_index: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit an unsigned 64-bit integer")
        if self.sample_index < 0:
            raise ValueError("sample_index must be >= 0")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.seed).jumped(self.sample_index))


def sample_beta(dist: BetaDistribution, rng: np.random.Generator) -> float:
    """Single draw from the truncated distribution."""
    return dist.sample(rng)


def beta_draws(dist: BetaDistribution, seed: int, sample_index: int, n: int) -> np.ndarray:
    """The first n coupling values of the (seed, sample_index) stream.

    Prefix-stable in n, so sweeps that reuse a sample across chain sizes see
    nested draws rather than fresh ones.
    """
    return dist.sample(RandomSeed(seed, sample_index).generator(), n)


def worker_count(n_tasks: int) -> int:
    """Worker cap from the environment; 0 or unset means auto."""
    raw = os.environ.get(THREADS_ENV_VAR, "0")
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise ValueError(f"{THREADS_ENV_VAR} must be >= 0, got {cap}")
    if cap == 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_tasks))


def monte_carlo_average(
    n_atoms: int,
    params: PhysicalParams,
    pulse: PulseShape,
    grid: TimeGrid,
    dist: BetaDistribution,
    n_samples: int,
    seed: int,
    simulate_fn=cascade.simulate,
    store_per_atom: bool = False,
    sample_index_offset: int = 0,
) -> Trace:
    """Average the simulated trace over disorder realizations.

    Each sample draws n_atoms independent coupling values from its own
    (seed, sample_index) stream, runs `simulate_fn`, and the traces are
    averaged elementwise. Samples may execute on a thread pool (capped by
    the CASCADEWG_THREADS environment variable), but accumulation happens in
    sample-index order, so the result is bit-identical for a given seed
    regardless of the number of workers.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")

    def one_sample(s: int) -> Trace:
        betas = beta_draws(dist, seed, sample_index_offset + s, n_atoms)
        config = ChainConfig(n_atoms, betas, params, pulse)
        try:
            return simulate_fn(config, grid, store_per_atom=store_per_atom)
        except SimulationError as exc:
            raise type(exc)(f"sample {sample_index_offset + s}: {exc}") from exc

    workers = worker_count(n_samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(one_sample, s) for s in range(n_samples)]
            traces = (f.result() for f in futures)  # consumed in sample order
            return _mean_trace(traces, n_samples, n_atoms)
    return _mean_trace((one_sample(s) for s in range(n_samples)), n_samples, n_atoms)


def _mean_trace(traces, n_samples: int, n_atoms: int) -> Trace:
    acc: Trace | None = None
    for trace in traces:
        if acc is None:
            acc = trace
            continue
        acc.p_f += trace.p_f
        acc.p_b += trace.p_b
        acc.sum_rho_ee += trace.sum_rho_ee
        acc.sum_beta_rho_ee += trace.sum_beta_rho_ee
        acc.alpha_out += trace.alpha_out
        if acc.per_atom_rho_ee is not None:
            acc.per_atom_rho_ee += trace.per_atom_rho_ee
            acc.per_atom_rho_ge += trace.per_atom_rho_ge
            acc.per_atom_alpha += trace.per_atom_alpha
    assert acc is not None
    if n_samples > 1:
        inv = 1.0 / n_samples
        acc.p_f *= inv
        acc.p_b *= inv
        acc.sum_rho_ee *= inv
        acc.sum_beta_rho_ee *= inv
        acc.alpha_out *= inv
        if acc.per_atom_rho_ee is not None:
            acc.per_atom_rho_ee *= inv
            acc.per_atom_rho_ge *= inv
            acc.per_atom_alpha *= inv
    acc.n_samples = n_samples
    acc.n_atoms = n_atoms
    return acc
