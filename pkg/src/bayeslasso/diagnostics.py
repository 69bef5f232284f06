"""Convergence and efficiency metrics over MCMC chains.

Bulk effective sample size and split R-hat follow the rank-normalized,
split-chain recipe: draws are converted to average ranks, mapped through
the normal quantile, each chain is split in half, and the multi-chain
autocorrelation sum is truncated by Geyer's initial monotone sequence.
Autocovariances use direct sums (chains at desk scale are short enough
that FFTs buy nothing).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri
from scipy.stats import rankdata

from .exceptions import ParameterError

__all__ = [
    "ess_bulk",
    "split_r_hat",
    "efficiency",
    "mix_percent",
    "ParameterDiagnostics",
    "DiagnosticsReport",
    "summarize_chains",
]


def _validate(chains, min_draws=8):
    ary = np.asarray(chains, dtype=float)
    if ary.ndim == 1:
        ary = ary[None, :]
    if ary.ndim != 2:
        raise ParameterError(f"chains must be 1-D or 2-D, got shape {ary.shape}")
    if ary.shape[1] < min_draws:
        raise ParameterError(f"need at least {min_draws} draws per chain")
    if not np.all(np.isfinite(ary)):
        raise ParameterError("chains must be finite")
    return ary


def _rank_normalize(ary):
    ranks = rankdata(ary, method="average").reshape(ary.shape)
    return ndtri((ranks - 0.375) / (ary.size + 0.25))


def _split(ary):
    half = ary.shape[1] // 2
    return np.vstack([ary[:, :half], ary[:, ary.shape[1] - half:]])


def _mean_autocov(centered, lag):
    # biased (1/n) autocovariance at the given lag, averaged over chains
    n = centered.shape[1]
    if lag >= n:
        return 0.0
    return float((centered[:, : n - lag] * centered[:, lag:]).sum(axis=1).mean()) / n


def ess_bulk(chains):
    """Rank-normalized bulk effective sample size of an M x N draw array.

    Constant chains are a degenerate zero-variance case: the nominal draw
    count is returned with a RuntimeWarning.
    """
    ary = _validate(chains)
    m_in, n_in = ary.shape
    if np.ptp(ary) == 0.0:
        warnings.warn(
            "ess_bulk: constant chains (zero variance); returning the "
            "nominal draw count",
            RuntimeWarning,
            stacklevel=2,
        )
        return float(m_in * n_in)
    z = _rank_normalize(_split(ary))
    m, n = z.shape
    chain_means = z.mean(axis=1)
    centered = z - chain_means[:, None]
    chain_vars = (centered ** 2).sum(axis=1) / (n - 1)
    mean_var = float(chain_vars.mean())
    var_plus = mean_var * (n - 1) / n
    if m > 1:
        var_plus += float(np.var(chain_means, ddof=1))

    rho = np.zeros(n)
    rho[0] = 1.0
    rho_even = 1.0
    rho_odd = 1.0 - (mean_var - _mean_autocov(centered, 1)) / var_plus
    rho[1] = rho_odd
    # Geyer initial positive sequence
    t = 1
    while t < n - 2 and (rho_even + rho_odd) >= 0.0:
        rho_even = 1.0 - (mean_var - _mean_autocov(centered, t + 1)) / var_plus
        rho_odd = 1.0 - (mean_var - _mean_autocov(centered, t + 2)) / var_plus
        rho[t + 1] = rho_even
        if (rho_even + rho_odd) >= 0.0:
            rho[t + 2] = rho_odd
        t += 2
    max_t = t
    # Geyer initial monotone sequence
    t = 1
    while t <= max_t - 2:
        if (rho[t + 1] + rho[t + 2]) > (rho[t - 1] + rho[t]):
            rho[t + 1] = (rho[t - 1] + rho[t]) / 2.0
            rho[t + 2] = rho[t + 1]
        t += 2
    tau = -1.0 + 2.0 * float(rho[:max_t].sum()) + float(rho[max_t + 1: max_t + 2].sum())
    if tau <= 0.0:
        warnings.warn(
            "ess_bulk: correlation-time estimate is non-positive (too few "
            "draws for a reliable ESS)",
            RuntimeWarning,
            stacklevel=2,
        )
    # antithetic chains may legitimately push ESS above the nominal draw
    # count; cap the excess at 1.5x
    tau = max(tau, 2.0 / 3.0)
    return float(m * n / tau)


def split_r_hat(chains):
    """Rank-normalized split potential-scale-reduction factor."""
    ary = _validate(chains)
    if np.ptp(ary) == 0.0:
        warnings.warn(
            "split_r_hat: constant chains (zero variance); returning 1.0",
            RuntimeWarning,
            stacklevel=2,
        )
        return 1.0
    z = _rank_normalize(_split(ary))
    m, n = z.shape
    chain_means = z.mean(axis=1)
    w = float(z.var(axis=1, ddof=1).mean())
    b = n * float(np.var(chain_means, ddof=1))
    var_hat = (n - 1) / n * w + b / n
    return math.sqrt(var_hat / w)


def efficiency(ess, seconds):
    """ESS per second of sampling time."""
    if not seconds > 0:
        raise ParameterError(f"seconds must be > 0, got {seconds!r}")
    return float(ess) / float(seconds)


def mix_percent(ess, n_total):
    """Mixing percentage 100 * ESS / total draw count."""
    if n_total < 1:
        raise ParameterError(f"n_total must be >= 1, got {n_total!r}")
    return 100.0 * float(ess) / float(n_total)


@dataclass(frozen=True)
class ParameterDiagnostics:
    ess: float
    r_hat: float
    mix_percent: float
    efficiency: float


@dataclass
class DiagnosticsReport:
    """Per-parameter diagnostics for one sampler run (possibly multi-chain)."""

    parameters: dict
    beta_ess_median: float
    n_chains: int
    n_samples_per_chain: int
    time_total_seconds: float
    time_post_burnin_seconds: float

    def to_dict(self):
        return {
            "parameters": {
                name: {
                    "ess": d.ess,
                    "r_hat": d.r_hat,
                    "mix_percent": d.mix_percent,
                    "efficiency": d.efficiency,
                }
                for name, d in self.parameters.items()
            },
            "beta_ess_median": self.beta_ess_median,
            "n_chains": self.n_chains,
            "n_samples_per_chain": self.n_samples_per_chain,
            "time_total_seconds": self.time_total_seconds,
            "time_post_burnin_seconds": self.time_post_burnin_seconds,
        }


def summarize_chains(outputs, beta_names=None):
    """Build a DiagnosticsReport from one or more ChainOutput-like objects.

    All chains must share shape. Efficiency divides each parameter's ESS
    by the summed sampling wall time (burn-in included); the post-burn-in
    total is reported alongside.
    """
    if not outputs:
        raise ParameterError("summarize_chains needs at least one chain")
    p = outputs[0].beta_draws.shape[1]
    n = outputs[0].beta_draws.shape[0]
    for out in outputs:
        if out.beta_draws.shape != (n, p):
            raise ParameterError("all chains must have identical draw shapes")
    names = list(beta_names) if beta_names else [f"beta_{j + 1}" for j in range(p)]
    if len(names) != p:
        raise ParameterError(f"expected {p} beta names, got {len(names)}")

    time_total = sum(out.wall_time_seconds for out in outputs)
    time_post = sum(out.wall_time_post_burnin_seconds for out in outputs)
    m = len(outputs)
    n_total = m * n

    def diag(stacked):
        ess = ess_bulk(stacked)
        return ParameterDiagnostics(
            ess=ess,
            r_hat=split_r_hat(stacked),
            mix_percent=mix_percent(ess, n_total),
            efficiency=efficiency(ess, time_total),
        )

    parameters = {}
    beta_ess = []
    for j, name in enumerate(names):
        stacked = np.stack([out.beta_draws[:, j] for out in outputs])
        parameters[name] = diag(stacked)
        beta_ess.append(parameters[name].ess)
    parameters["sigma2"] = diag(np.stack([out.sigma2_draws for out in outputs]))
    parameters["lambda2"] = diag(np.stack([out.lambda2_draws for out in outputs]))

    return DiagnosticsReport(
        parameters=parameters,
        beta_ess_median=float(np.median(beta_ess)),
        n_chains=m,
        n_samples_per_chain=n,
        time_total_seconds=time_total,
        time_post_burnin_seconds=time_post,
    )
