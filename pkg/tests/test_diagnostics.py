import numpy as np
import pytest

from bayeslasso.diagnostics import (
    DiagnosticsReport,
    ess_bulk,
    efficiency,
    mix_percent,
    split_r_hat,
    summarize_chains,
)
from bayeslasso.exceptions import ParameterError


def ar1_chains(rho, m, n, seed):
    gen = np.random.default_rng(seed)
    out = np.empty((m, n))
    scale = np.sqrt(1 - rho ** 2)
    for c in range(m):
        x = gen.standard_normal()
        for t in range(n):
            x = rho * x + scale * gen.standard_normal()
            out[c, t] = x
    return out


class TestEssBulk:
    def test_iid_near_nominal(self):
        gen = np.random.default_rng(0)
        chains = gen.standard_normal((4, 2500))
        ratio = ess_bulk(chains) / chains.size
        assert 0.8 <= ratio <= 1.2

    def test_ar1_matches_analytic(self):
        rho = 0.9
        chains = ar1_chains(rho, 4, 5000, seed=1)
        expected = chains.size * (1 - rho) / (1 + rho)
        assert abs(ess_bulk(chains) - expected) <= 0.25 * expected

    def test_disjoint_chains_collapse(self):
        gen = np.random.default_rng(2)
        chains = gen.standard_normal((2, 2000)) * 0.1
        chains[1] += 100.0
        assert ess_bulk(chains) < 0.1 * chains.size

    def test_monotone_transform_invariance(self):
        chains = ar1_chains(0.5, 4, 1000, seed=3)
        assert ess_bulk(chains) == ess_bulk(np.exp(chains))

    def test_constant_chain_degenerate(self):
        with pytest.warns(RuntimeWarning, match="constant"):
            assert ess_bulk(np.ones((2, 100))) == 200.0

    def test_validation(self):
        with pytest.raises(ParameterError):
            ess_bulk(np.ones((2, 4)))
        with pytest.raises(ParameterError):
            ess_bulk(np.array([[1.0, np.nan] * 8]))


class TestSplitRhat:
    def test_identical_stationary(self):
        gen = np.random.default_rng(4)
        chains = gen.standard_normal((4, 2000))
        assert 0.99 <= split_r_hat(chains) <= 1.01

    def test_mean_shifted(self):
        # rank normalization saturates the two-chain case near 1.8; four
        # chains at distinct levels push the statistic well past 2
        gen = np.random.default_rng(5)
        chains = gen.standard_normal((4, 1000))
        chains += np.array([0.0, 5.0, 10.0, 15.0])[:, None]
        assert split_r_hat(chains) > 2.0
        pair = gen.standard_normal((2, 1000))
        pair[1] += 5.0
        assert split_r_hat(pair) > 1.5

    def test_single_chain_trend(self):
        gen = np.random.default_rng(6)
        chain = gen.standard_normal(1000) + np.linspace(0, 4, 1000)
        assert split_r_hat(chain) > 1.1

    def test_affine_invariance(self):
        chains = ar1_chains(0.3, 4, 800, seed=7)
        assert split_r_hat(chains) == split_r_hat(3.5 * chains - 11.0)

    def test_constant_chain(self):
        with pytest.warns(RuntimeWarning):
            assert split_r_hat(np.zeros((2, 64))) == 1.0


class TestRatios:
    def test_efficiency(self):
        assert efficiency(5000.0, 2.0) == 2500.0

    def test_efficiency_domain(self):
        with pytest.raises(ParameterError):
            efficiency(100.0, 0.0)

    def test_mix_percent(self):
        assert mix_percent(5000.0, 5000) == 100.0
        assert mix_percent(1315.0, 5000) == pytest.approx(26.3)
        assert mix_percent(2500.0, 5000) == 50.0

    def test_identity_links_the_three(self):
        ess, n_total, secs = 1234.5, 5000, 3.7
        assert efficiency(ess, secs) == pytest.approx(
            mix_percent(ess, n_total) * n_total / (100.0 * secs)
        )


class _FakeChain:
    def __init__(self, gen, n, p):
        self.beta_draws = gen.standard_normal((n, p))
        self.sigma2_draws = 1.0 + 0.1 * gen.standard_normal(n) ** 2
        self.lambda2_draws = 2.0 + 0.1 * gen.standard_normal(n) ** 2
        self.wall_time_seconds = 2.0
        self.wall_time_post_burnin_seconds = 1.5


class TestSummarize:
    def test_report_structure(self):
        gen = np.random.default_rng(8)
        chains = [_FakeChain(gen, 500, 3) for _ in range(4)]
        report = summarize_chains(chains, beta_names=["a", "b", "c"])
        assert isinstance(report, DiagnosticsReport)
        assert set(report.parameters) == {"a", "b", "c", "sigma2", "lambda2"}
        assert report.n_chains == 4 and report.n_samples_per_chain == 500
        assert report.time_total_seconds == pytest.approx(8.0)
        betas = [report.parameters[k].ess for k in ("a", "b", "c")]
        assert report.beta_ess_median == pytest.approx(float(np.median(betas)))
        d = report.to_dict()
        assert d["parameters"]["a"]["ess"] > 0
        for diag in report.parameters.values():
            assert diag.efficiency == pytest.approx(diag.ess / 8.0)
            assert diag.mix_percent == pytest.approx(100 * diag.ess / 2000)

    def test_requires_consistent_shapes(self):
        gen = np.random.default_rng(9)
        with pytest.raises(ParameterError):
            summarize_chains([_FakeChain(gen, 500, 3), _FakeChain(gen, 400, 3)])
