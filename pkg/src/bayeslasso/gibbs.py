"""Two Gibbs samplers for Bayesian lasso linear regression.

Model: y ~ N(X beta, sigma^2 I); each beta_j carries a Laplace prior with
rate lambda/sigma (represented through auxiliary inverse-Gaussian scales
in the block sampler); sigma^2 ~ InvGamma(a_tilde, b_tilde) and
lambda^2 ~ Gamma(u, v).

``pc_gibbs`` updates beta as one multivariate normal block (one p x p
Cholesky per iteration, O(N p^3) total after precomputation) and draws
sigma^2, lambda^2 and the auxiliary scales from closed-form conditionals.

``hans_gibbs`` updates beta coordinate-wise from its exact Lasso full
conditional Lasso(||X_j||^2 / sigma^2, X_j'(y - X_{-j} beta_{-j}) / sigma^2,
lambda / sigma) and slice-samples sigma^2 and lambda^2. Bookkeeping is
incremental: the Gram path (n > p) maintains delta = X'X beta, the
residual path (p >= n) maintains the fitted vector, so each coordinate
costs O(min(n, p)) and no p x p factorization ever runs.
"""

import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._jit import scalar_jit
from .data import RegressionData
from .distribution import _mixture_core, _quantile_with_rep
from .exceptions import NumericalError, ParameterError
from .samplers import RngStream, SliceConfig, _cho_factor, _inverse_gaussian_array

__all__ = [
    "PriorHyperparams",
    "GibbsConfig",
    "ChainOutput",
    "pc_gibbs",
    "hans_gibbs",
    "coordinate_params",
    "run_chains",
]

#: |beta_j| is clamped here in the auxiliary-scale update; the exact-zero
#: event has measure zero and the clamp keeps the inverse-Gaussian mean
#: finite.
BETA_ABS_FLOOR = 1e-10


@dataclass(frozen=True)
class PriorHyperparams:
    """(a_tilde, b_tilde) for the sigma^2 prior, (u, v) for lambda^2."""

    a_tilde: float = 0.01
    b_tilde: float = 0.01
    u: float = 0.01
    v: float = 0.01

    def __post_init__(self):
        for name in ("a_tilde", "b_tilde", "u", "v"):
            val = float(getattr(self, name))
            if not (math.isfinite(val) and val > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {val!r}")


@dataclass
class GibbsConfig:
    """Chain controls: lengths, seed, initial state, progress printing."""

    n_samples: int
    n_burnin: int = 0
    seed: object = 0
    sigma2_init: float = 1.0
    lambda2_init: float = 1.0
    beta_init: object = None
    verbose: bool = False

    def __post_init__(self):
        if self.n_samples < 1:
            raise ParameterError("n_samples must be >= 1")
        if self.n_burnin < 0:
            raise ParameterError("n_burnin must be >= 0")
        if not self.sigma2_init > 0 or not self.lambda2_init > 0:
            raise ParameterError("sigma2_init and lambda2_init must be > 0")


@dataclass
class ChainOutput:
    """Post-burn-in draws plus timing; immutable by convention once built."""

    beta_draws: np.ndarray
    sigma2_draws: np.ndarray
    lambda2_draws: np.ndarray
    wall_time_seconds: float
    sampler_tag: str
    n_burnin: int = 0
    wall_time_post_burnin_seconds: float = 0.0

    @property
    def n_samples(self):
        return self.sigma2_draws.shape[0]


def _initial_beta(config, p):
    if config.beta_init is None:
        return np.zeros(p)
    beta = np.asarray(config.beta_init, dtype=float)
    if beta.shape == ():
        beta = np.full(p, float(beta))
    if beta.shape != (p,):
        raise ParameterError(f"beta_init must have shape ({p},), got {beta.shape}")
    if not np.all(np.isfinite(beta)):
        raise ParameterError("beta_init must be finite")
    return beta.copy()


def _progress(tag, i, total, verbose):
    if verbose and (i + 1) % 1000 == 0:
        print(f"[{tag}] iteration {i + 1}/{total}", file=sys.stderr)


def pc_gibbs(data, priors, config, *, _fix_lambda2=None):
    """Block Gibbs sampler with auxiliary inverse-Gaussian scales.

    Per iteration: beta ~ N_p((X'X + lambda^2 A)^{-1} X'y,
    sigma^2 (X'X + lambda^2 A)^{-1}) with A = diag(a); sigma^2 ~ InvGamma;
    lambda^2 ~ Gamma; a_j ~ InverseGaussian(sigma/(lambda |beta_j|), 1)
    evaluated at the previous iteration's beta_j (as the update order has
    it) and the current sigma and lambda. ``_fix_lambda2`` is a test-only
    hook that pins lambda^2 and freezes the shrinkage block, reducing the
    beta draw to the ordinary Bayesian linear-regression conditional.
    """
    n, p = data.n, data.p
    rng = RngStream(config.seed)
    gen = rng.generator
    XtX, Xty, y_sq = data.XtX, data.Xty, data.y_sq_norm

    beta = _initial_beta(config, p)
    sigma2 = float(config.sigma2_init)
    lam2 = float(config.lambda2_init) if _fix_lambda2 is None else float(_fix_lambda2)
    a = np.ones(p)

    n_keep, n_burn = config.n_samples, config.n_burnin
    total = n_keep + n_burn
    beta_out = np.empty((n_keep, p))
    sigma2_out = np.empty(n_keep)
    lam2_out = np.empty(n_keep)

    shape_sigma = priors.a_tilde + (n + p) / 2.0
    shape_lam = priors.u + p / 2.0
    diag_idx = np.arange(p)

    t0 = time.perf_counter()
    t_post = t0
    for i in range(total):
        if i == n_burn:
            t_post = time.perf_counter()
        beta_prev = beta

        M = XtX.copy()
        M[diag_idx, diag_idx] += lam2 * a
        try:
            cho = _cho_factor(M)
        except NumericalError as exc:
            raise NumericalError(f"pc_gibbs iteration {i + 1}: {exc}") from exc
        mean = scipy.linalg.cho_solve(cho, Xty)
        z = gen.standard_normal(p)
        beta = mean + math.sqrt(sigma2) * scipy.linalg.solve_triangular(
            cho[0], z, lower=True, trans=1
        )

        rate_sigma = (
            priors.b_tilde + 0.5 * y_sq - Xty @ beta + 0.5 * beta @ (M @ beta)
        )
        if not rate_sigma > 0 or not np.all(np.isfinite(beta)):
            raise NumericalError(
                f"pc_gibbs iteration {i + 1}: non-finite state "
                f"(rate_sigma={rate_sigma!r})"
            )
        sigma2 = 1.0 / gen.gamma(shape_sigma, 1.0 / rate_sigma)

        if _fix_lambda2 is None:
            rate_lam = priors.v + (a * beta * beta).sum() / (2.0 * sigma2)
            lam2 = gen.gamma(shape_lam, 1.0 / rate_lam)
            ig_means = math.sqrt(sigma2) / (
                math.sqrt(lam2) * np.maximum(np.abs(beta_prev), BETA_ABS_FLOOR)
            )
            a = _inverse_gaussian_array(ig_means, rng)

        if i >= n_burn:
            k = i - n_burn
            beta_out[k] = beta
            sigma2_out[k] = sigma2
            lam2_out[k] = lam2
        _progress("pc", i, total, config.verbose)
    t1 = time.perf_counter()

    return ChainOutput(
        beta_draws=beta_out,
        sigma2_draws=sigma2_out,
        lambda2_draws=lam2_out,
        wall_time_seconds=t1 - t0,
        sampler_tag="PC",
        n_burnin=n_burn,
        wall_time_post_burnin_seconds=t1 - t_post,
    )


@scalar_jit
def _asym_laplace_draw(b, c, gen):
    # kernel exp(b x - c|x|) with c > |b|
    u = gen.random()
    while u <= 0.0:
        u = gen.random()
    e = -math.log(u)
    if gen.random() < (c - b) / (2.0 * c):
        return -e / (b + c)
    return e / (c - b)


@scalar_jit
def _draw_coordinate(a, b, c, gen):
    # one draw from Lasso(a, b, c); a == 0 falls back to the Laplace limit
    if a > 0.0:
        u = gen.random()
        while u <= 0.0:
            u = gen.random()
        v1, v2, mu1, mu2, sigma, log_z, log_w, log_1mw = _mixture_core(a, b, c)
        return _quantile_with_rep(u, mu1, mu2, sigma, log_w, log_1mw)
    return _asym_laplace_draw(b, c, gen)


@scalar_jit
def _hans_sweep_gram(XtX, Xty, col_sq, beta, delta, sigma2, lam, gen):
    # coordinate sweep maintaining delta = X'X beta; O(p) per coordinate
    p = beta.shape[0]
    inv_s2 = 1.0 / sigma2
    c = lam / math.sqrt(sigma2)
    for j in range(p):
        bj = beta[j]
        for k in range(p):  # X'X is symmetric: row j is column j
            delta[k] -= XtX[j, k] * bj
        a = col_sq[j] * inv_s2
        b = (Xty[j] - delta[j]) * inv_s2
        if a <= 0.0 and c <= abs(b):
            return j + 1
        new_bj = _draw_coordinate(a, b, c, gen)
        beta[j] = new_bj
        for k in range(p):
            delta[k] += XtX[j, k] * new_bj
    return 0


@scalar_jit
def _hans_sweep_residual(Xt, y, col_sq, beta, yhat, sigma2, lam, gen):
    # coordinate sweep maintaining yhat = X beta; O(n) per coordinate
    p = beta.shape[0]
    n = y.shape[0]
    inv_s2 = 1.0 / sigma2
    c = lam / math.sqrt(sigma2)
    for j in range(p):
        bj = beta[j]
        s = 0.0
        for i in range(n):  # X_j'(y - yhat) + ||X_j||^2 b_j = X_j' r_j
            s += Xt[j, i] * (y[i] - yhat[i])
        a = col_sq[j] * inv_s2
        b = (s + col_sq[j] * bj) * inv_s2
        if a <= 0.0 and c <= abs(b):
            return j + 1
        new_bj = _draw_coordinate(a, b, c, gen)
        diff = new_bj - bj
        for i in range(n):
            yhat[i] += Xt[j, i] * diff
        beta[j] = new_bj
    return 0


@scalar_jit
def _slice_logf(kind, s, t1, t2, t3):
    if s <= 0.0:
        return -math.inf
    if kind == 0:  # sigma^2: -(t1) log s - t2/s - t3/sqrt(s)
        return -t1 * math.log(s) - t2 / s - t3 / math.sqrt(s)
    # lambda^2: t1 log s - t2 s - t3 sqrt(s)
    return t1 * math.log(s) - t2 * s - t3 * math.sqrt(s)


@scalar_jit
def _slice_positive(kind, current, t1, t2, t3, width, max_stepout, max_shrink, gen):
    # step-out/shrink on (0, inf); mirrors samplers.slice_sample_step
    log_y = _slice_logf(kind, current, t1, t2, t3) + math.log(gen.random())
    left = current - width * gen.random()
    right = left + width
    j = int(max_stepout * gen.random())
    k = (max_stepout - 1) - j
    while j > 0 and _slice_logf(kind, left, t1, t2, t3) > log_y:
        left -= width
        j -= 1
    while k > 0 and _slice_logf(kind, right, t1, t2, t3) > log_y:
        right += width
        k -= 1
    if left < 0.0:
        left = 0.0
    for _ in range(max_shrink):
        x = left + gen.random() * (right - left)
        if _slice_logf(kind, x, t1, t2, t3) > log_y:
            return x
        if x < current:
            left = x
        else:
            right = x
    return current


def hans_gibbs(data, priors, config, *, counters=None):
    """Coordinate-wise Gibbs sampler using the Lasso full conditionals.

    Runs in O(N p min(n, p)) with no matrix factorization: the n > p
    branch keeps delta = X'X beta up to date through rank-one column
    arithmetic and recovers the residual sum of squares algebraically; the
    p >= n branch keeps the fitted vector and partial residuals instead.
    sigma^2 and lambda^2 are updated by one shared slice-sampling routine
    applied to their two log densities. ``counters``, when given a dict,
    receives instrumentation (coordinate draw count, bookkeeping vector
    length, branch).
    """
    n, p = data.n, data.p
    rng = RngStream(config.seed)
    gen = rng.generator

    beta = _initial_beta(config, p)
    sigma2 = float(config.sigma2_init)
    lam2 = float(config.lambda2_init)

    n_keep, n_burn = config.n_samples, config.n_burnin
    total = n_keep + n_burn
    beta_out = np.empty((n_keep, p))
    sigma2_out = np.empty(n_keep)
    lam2_out = np.empty(n_keep)

    gram_path = n > p
    col_sq = np.ascontiguousarray(data.col_sq_norms)
    if gram_path:
        XtX = np.ascontiguousarray(data.XtX)
        Xty = np.ascontiguousarray(data.Xty)
    else:
        Xt = np.ascontiguousarray(data.X.T)
        y = np.ascontiguousarray(data.y)

    slice_cfg = SliceConfig()
    t1_sigma = priors.a_tilde + (n + p) / 2.0 + 1.0
    t1_lam = priors.u + p / 2.0 - 1.0

    t0 = time.perf_counter()
    t_post = t0
    for i in range(total):
        if i == n_burn:
            t_post = time.perf_counter()
        lam = math.sqrt(lam2)
        if gram_path:
            delta = XtX @ beta
            status = _hans_sweep_gram(XtX, Xty, col_sq, beta, delta, sigma2, lam, gen)
            rss = data.y_sq_norm - 2.0 * (data.Xty @ beta) + beta @ delta
        else:
            yhat = data.X @ beta
            status = _hans_sweep_residual(Xt, y, col_sq, beta, yhat, sigma2, lam, gen)
            resid = y - yhat
            rss = resid @ resid
        if status:
            raise NumericalError(
                f"hans_gibbs iteration {i + 1}: coordinate {status} has zero "
                "column norm and a non-normalizable Laplace limit"
            )
        if not np.all(np.isfinite(beta)):
            raise NumericalError(f"hans_gibbs iteration {i + 1}: non-finite beta")
        rss = max(rss, 0.0)
        l1 = float(np.abs(beta).sum())

        sigma2 = _slice_positive(
            0, sigma2, t1_sigma, priors.b_tilde + 0.5 * rss, lam * l1,
            slice_cfg.initial_width, slice_cfg.max_stepout, slice_cfg.max_shrink, gen,
        )
        lam2 = _slice_positive(
            1, lam2, t1_lam, priors.v, l1 / math.sqrt(sigma2),
            slice_cfg.initial_width, slice_cfg.max_stepout, slice_cfg.max_shrink, gen,
        )

        if i >= n_burn:
            k = i - n_burn
            beta_out[k] = beta
            sigma2_out[k] = sigma2
            lam2_out[k] = lam2
        _progress("hans", i, total, config.verbose)
    t1 = time.perf_counter()

    if counters is not None:
        counters["iterations"] = total
        counters["coordinate_draws"] = total * p
        counters["sweep_vector_len"] = p if gram_path else n
        counters["path"] = "gram" if gram_path else "residual"

    return ChainOutput(
        beta_draws=beta_out,
        sigma2_draws=sigma2_out,
        lambda2_draws=lam2_out,
        wall_time_seconds=t1 - t0,
        sampler_tag="Hans",
        n_burnin=n_burn,
        wall_time_post_burnin_seconds=t1 - t_post,
    )


def coordinate_params(data, beta, j, sigma2, lam, path="gram"):
    """Lasso full-conditional parameters (a, b, c) for coordinate j.

    ``path`` selects the bookkeeping route: ``gram`` assembles b from the
    precomputed X'X and X'y, ``residual`` from the partial residual; the
    two agree to rounding. c = lam / sqrt(sigma2) with lam on the lambda
    (not lambda^2) scale.
    """
    from .distribution import LassoParams

    beta = np.asarray(beta, dtype=float)
    if not 0 <= j < data.p:
        raise ParameterError(f"coordinate index {j} out of range for p={data.p}")
    if not sigma2 > 0 or not lam > 0:
        raise ParameterError("sigma2 and lam must be > 0")
    if path not in ("gram", "residual"):
        raise ParameterError(f"path must be 'gram' or 'residual', got {path!r}")
    a = float(data.col_sq_norms[j]) / sigma2
    if path == "gram":
        partial = float(data.XtX[j] @ beta - data.XtX[j, j] * beta[j])
        b = (float(data.Xty[j]) - partial) / sigma2
    else:
        r = data.y - data.X @ beta + data.X[:, j] * beta[j]
        b = float(data.X[:, j] @ r) / sigma2
    return LassoParams(a, b, lam / math.sqrt(sigma2))


def run_chains(sampler, data, priors, config, n_chains=1, parallel=False):
    """Run ``n_chains`` independent chains with derived, reproducible seeds.

    ``sampler`` is ``pc_gibbs`` or ``hans_gibbs``. Chain k reuses
    ``config`` but with seed [seed, k], so chains are independent yet
    fully determined by the base seed (and identical whether or not they
    run concurrently). With ``parallel`` each chain gets its own worker
    thread; results are assembled in chain order after the join.
    """
    if n_chains < 1:
        raise ParameterError("n_chains must be >= 1")
    configs = [
        GibbsConfig(
            n_samples=config.n_samples,
            n_burnin=config.n_burnin,
            seed=[_seed_scalar(config.seed), k],
            sigma2_init=config.sigma2_init,
            lambda2_init=config.lambda2_init,
            beta_init=config.beta_init,
            verbose=config.verbose,
        )
        for k in range(n_chains)
    ]
    if parallel and n_chains > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_chains) as pool:
            futures = [pool.submit(sampler, data, priors, c) for c in configs]
            return [f.result() for f in futures]
    return [sampler(data, priors, c) for c in configs]


def _seed_scalar(seed):
    if isinstance(seed, (list, tuple)):
        return int(seed[0])
    return int(seed)
