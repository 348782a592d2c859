"""Truncated-Gaussian sampling and deterministic Monte Carlo averaging."""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import kstest, norm

from cascadewg import (
    BetaDistribution,
    ChainConfig,
    IntegrationDiagnosticError,
    PulseShape,
    RandomSeed,
    TimeGrid,
    beta_draws,
    monte_carlo_average,
    sample_beta,
    simulate,
)
from cascadewg.disorder import worker_count

MEAN, SIGMA = 0.0108, 0.0065


def truncated_cdf(x):
    lo = norm.cdf(0.0, loc=MEAN, scale=SIGMA)
    return np.clip((norm.cdf(x, loc=MEAN, scale=SIGMA) - lo) / (1.0 - lo), 0.0, 1.0)


class TestBetaDistribution:
    def test_degenerate_sigma_returns_mean(self):
        dist = BetaDistribution(MEAN, 0.0)
        rng = RandomSeed(1).generator()
        assert sample_beta(dist, rng) == MEAN
        assert np.all(dist.sample(rng, 100) == MEAN)

    def test_degenerate_negative_mean_rejected(self):
        dist = BetaDistribution(-0.01, 0.0065)  # fine: sigma > 0
        with pytest.raises(ValueError):
            BetaDistribution(-0.01, 0.0)
        with pytest.raises(ValueError):
            BetaDistribution(0.0, 0.0)

    def test_sigma_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            BetaDistribution(MEAN, -0.1)

    def test_truncation_point_fixed(self):
        with pytest.raises(ValueError):
            BetaDistribution(MEAN, SIGMA, lower_cut=0.001)

    def test_no_negative_draws(self):
        dist = BetaDistribution(0.001, 0.01)  # heavily truncated
        draws = dist.sample(RandomSeed(3).generator(), 1_000_000)
        assert draws.min() >= 0.0

    def test_empirical_distribution_matches_truncated_density(self):
        dist = BetaDistribution(MEAN, SIGMA)
        draws = dist.sample(RandomSeed(42).generator(), 1_000_000)
        stat = kstest(draws, truncated_cdf).statistic
        assert stat < 0.002

    def test_sample_mean_matches_quadrature(self):
        dist = BetaDistribution(MEAN, SIGMA)
        draws = dist.sample(RandomSeed(7).generator(), 1_000_000)
        expected, _ = quad(lambda x: x * dist.pdf(x), 0.0, MEAN + 12 * SIGMA)
        sem = draws.std() / np.sqrt(draws.size)
        assert abs(draws.mean() - expected) < 5 * sem

    def test_rejection_fraction_matches_gaussian_cdf(self):
        dist = BetaDistribution(MEAN, SIGMA)
        size = 1_000_000
        values, n_proposals = dist.sample_with_proposal_count(
            RandomSeed(11).generator(), size
        )
        rejected_fraction = 1.0 - size / n_proposals
        # tolerance covers binomial noise plus the final partial batch
        assert rejected_fraction == pytest.approx(norm.cdf(-MEAN / SIGMA), abs=2e-3)

    def test_pdf_normalized(self):
        dist = BetaDistribution(MEAN, SIGMA)
        total, _ = quad(dist.pdf, 0.0, MEAN + 12 * SIGMA)
        assert total == pytest.approx(1.0, abs=1e-9)


class TestDrawStreams:
    def test_reproducible(self):
        a = beta_draws(BetaDistribution(MEAN, SIGMA), 123, 5, 64)
        b = beta_draws(BetaDistribution(MEAN, SIGMA), 123, 5, 64)
        np.testing.assert_array_equal(a, b)

    def test_prefix_stable(self):
        dist = BetaDistribution(MEAN, SIGMA)
        short = beta_draws(dist, 9, 2, 50)
        long = beta_draws(dist, 9, 2, 700)
        np.testing.assert_array_equal(short, long[:50])

    def test_distinct_sample_indices_are_distinct_streams(self):
        dist = BetaDistribution(MEAN, SIGMA)
        first = {tuple(beta_draws(dist, 5, s, 4)) for s in range(100)}
        assert len(first) == 100

    def test_seed_validation(self):
        with pytest.raises(ValueError):
            RandomSeed(-1)
        with pytest.raises(ValueError):
            RandomSeed(2**64)
        with pytest.raises(ValueError):
            RandomSeed(0, -1)


class TestWorkerCount:
    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("CASCADEWG_THREADS", "3")
        assert worker_count(100) == 3
        assert worker_count(2) == 2

    def test_auto(self, monkeypatch):
        monkeypatch.setenv("CASCADEWG_THREADS", "0")
        assert worker_count(1) == 1
        assert worker_count(10_000) >= 1

    def test_invalid(self, monkeypatch):
        monkeypatch.setenv("CASCADEWG_THREADS", "many")
        with pytest.raises(ValueError):
            worker_count(4)
        monkeypatch.setenv("CASCADEWG_THREADS", "-2")
        with pytest.raises(ValueError):
            worker_count(4)


class TestMonteCarloAverage:
    def _run(self, n_samples, seed, store=False):
        params = __import__("cascadewg").PhysicalParams()
        pulse = PulseShape.rectangle(30.0, 5.0)
        grid = TimeGrid(-5.0, 25.0, 0.02)
        return monte_carlo_average(
            8, params, pulse, grid, BetaDistribution(MEAN, SIGMA),
            n_samples, seed, store_per_atom=store,
        )

    def test_single_degenerate_sample_equals_plain_simulate(self, params):
        pulse = PulseShape.rectangle(30.0, 5.0)
        grid = TimeGrid(-5.0, 25.0, 0.02)
        averaged = monte_carlo_average(
            6, params, pulse, grid, BetaDistribution(MEAN, 0.0), 1, 99
        )
        direct = simulate(ChainConfig.uniform(6, params, pulse), grid)
        np.testing.assert_array_equal(averaged.p_f, direct.p_f)
        np.testing.assert_array_equal(averaged.p_b, direct.p_b)

    def test_mean_of_identical_samples_is_the_sample(self, params):
        # sigma = 0 makes every draw identical, so averaging is a no-op (up
        # to the final 1/n scaling of an n-fold sum).
        pulse = PulseShape.rectangle(30.0, 5.0)
        grid = TimeGrid(-5.0, 25.0, 0.02)
        averaged = monte_carlo_average(
            6, params, pulse, grid, BetaDistribution(MEAN, 0.0), 3, 99
        )
        direct = simulate(ChainConfig.uniform(6, params, pulse), grid)
        np.testing.assert_allclose(averaged.p_b, direct.p_b, rtol=1e-15, atol=0)
        np.testing.assert_allclose(averaged.p_f, direct.p_f, rtol=1e-15, atol=1e-18)

    def test_byte_identical_across_thread_counts(self, monkeypatch):
        monkeypatch.setenv("CASCADEWG_THREADS", "1")
        serial = self._run(10, 1234, store=True)
        monkeypatch.setenv("CASCADEWG_THREADS", "4")
        threaded = self._run(10, 1234, store=True)
        assert serial.p_f.tobytes() == threaded.p_f.tobytes()
        assert serial.p_b.tobytes() == threaded.p_b.tobytes()
        assert serial.sum_rho_ee.tobytes() == threaded.sum_rho_ee.tobytes()
        assert serial.per_atom_rho_ee.tobytes() == threaded.per_atom_rho_ee.tobytes()

    def test_seed_changes_result(self):
        a = self._run(5, 1)
        b = self._run(5, 2)
        assert not np.array_equal(a.p_f, b.p_f)

    def test_sample_count_recorded(self):
        assert self._run(4, 5).n_samples == 4

    def test_error_annotated_with_sample_index(self, params):
        pulse = PulseShape.rectangle(1e5, 5.0)
        grid = TimeGrid(-5.0, 5.0, 2.5)  # wildly unstable
        with pytest.raises(IntegrationDiagnosticError, match=r"sample \d+:"):
            monte_carlo_average(
                4, params, pulse, grid, BetaDistribution(MEAN, SIGMA), 4, 0
            )

    def test_requires_at_least_one_sample(self, params):
        with pytest.raises(ValueError):
            monte_carlo_average(
                2, params, PulseShape.rectangle(1.0, 5.0), TimeGrid(-5, 5, 0.1),
                BetaDistribution(MEAN, SIGMA), 0, 0,
            )
