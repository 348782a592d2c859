import numpy as np
import pytest

from cascadewg import ChainConfig, PhysicalParams, PulseShape, TimeGrid, simulate


@pytest.fixture(scope="session")
def params() -> PhysicalParams:
    return PhysicalParams()


@pytest.fixture(scope="session", autouse=True)
def warm_kernels(params):
    # First call compiles the numba kernels; keep it out of individual timings.
    pulse = PulseShape.rectangle(1.0, 5.0)
    simulate(ChainConfig.uniform(2, params, pulse), TimeGrid(-5.0, 5.0, 0.1))


def short_grid(dt: float = 0.01, t_end: float = 30.0) -> TimeGrid:
    return TimeGrid(-5.0, t_end, dt)


def pi_pulse_flux(params: PhysicalParams, beta_f: float, duration: float = 5.0, area_pi: float = 1.0) -> float:
    omega = area_pi * np.pi / duration
    return omega**2 / (4.0 * beta_f * params.gamma_total)
