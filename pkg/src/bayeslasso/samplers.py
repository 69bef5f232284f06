"""Reusable stochastic kernels: seedable streams, multivariate normal and
inverse-Gaussian/gamma draws, truncated-normal moments, and univariate
slice sampling on the positive half-line."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._jit import scalar_jit
from .exceptions import NumericalError, ParameterError
from .special import _mills

__all__ = [
    "RngStream",
    "SliceConfig",
    "mvn_sample",
    "inverse_gaussian_sample",
    "gamma_sample",
    "inverse_gamma_sample",
    "trunc_normal_moments",
    "slice_sample_step",
    "asymmetric_laplace_sample",
    "factorization_count",
]

_FACTORIZATIONS = 0


def factorization_count():
    """Number of dense Cholesky factorizations performed so far (process-wide)."""
    return _FACTORIZATIONS


class RngStream:
    """Seedable random stream backed by PCG64.

    Identical seeds give identical draw sequences across runs. ``spawn``
    derives independent, reproducible child streams for parallel chains.
    A stream is single-owner: it may be handed between threads but must
    not be shared concurrently.
    """

    def __init__(self, seed, _sequence=None):
        self.seed = seed
        self._sequence = (
            np.random.SeedSequence(seed) if _sequence is None else _sequence
        )
        self.generator = np.random.Generator(np.random.PCG64(self._sequence))

    def spawn(self, n):
        return [RngStream(self.seed, _sequence=s) for s in self._sequence.spawn(n)]

    def __repr__(self):
        key = self._sequence.spawn_key
        return f"RngStream(seed={self.seed!r}, spawn_key={key!r})"


@dataclass(frozen=True)
class SliceConfig:
    initial_width: float = 1.0
    max_stepout: int = 64
    max_shrink: int = 128

    def __post_init__(self):
        if not (self.initial_width > 0):
            raise ParameterError("initial_width must be > 0")
        if self.max_stepout < 1 or self.max_shrink < 1:
            raise ParameterError("step-out and shrink budgets must be >= 1")


def _cho_factor(matrix):
    global _FACTORIZATIONS
    _FACTORIZATIONS += 1
    try:
        return scipy.linalg.cho_factor(matrix, lower=True)
    except scipy.linalg.LinAlgError as exc:
        diag = np.diagonal(matrix)
        raise NumericalError(
            "Cholesky factorization failed: "
            f"shape={matrix.shape}, min_diag={diag.min():.3e}, "
            f"max_diag={diag.max():.3e}, "
            f"asym={np.max(np.abs(matrix - matrix.T)):.3e}"
        ) from exc


def mvn_sample(mean, precision, scale, rng, *, cho=None):
    """Draw from N(mean, scale * precision^{-1}).

    ``precision`` must be symmetric positive definite; one Cholesky
    factorization is performed (O(p^3)) unless a precomputed ``cho``
    (as returned by scipy's ``cho_factor``) is supplied, after which the
    draw itself is O(p^2).
    """
    mean = np.asarray(mean, dtype=float)
    if not scale > 0:
        raise ParameterError(f"scale must be > 0, got {scale!r}")
    if cho is None:
        cho = _cho_factor(np.asarray(precision, dtype=float))
    c, lower = cho
    z = rng.generator.standard_normal(mean.shape[0])
    # precision = L L^T  =>  L^{-T} z ~ N(0, precision^{-1})
    x = scipy.linalg.solve_triangular(c, z, lower=lower, trans=1)
    return mean + math.sqrt(scale) * x


@scalar_jit
def _inverse_gaussian_draw(mean, shape, nu, u):
    # Michael-Schucany-Haas transformation; t - sqrt(t(t+4)) is rationalized
    # to avoid cancellation for large t
    t = mean * nu / shape
    if t > 0.0:
        s = math.sqrt(t * (t + 4.0))
        x = mean * (1.0 - 2.0 * t / (t + s))
    else:
        x = mean
    if x <= 0.0:
        x = 5e-324
    if u <= mean / (mean + x):
        return x
    return mean * mean / x


def inverse_gaussian_sample(mean, shape, rng):
    """Inverse-Gaussian draw with E = mean and Var = mean^3 / shape."""
    if not (mean > 0 and shape > 0):
        raise ParameterError("inverse_gaussian_sample requires mean > 0 and shape > 0")
    nu = rng.generator.standard_normal() ** 2
    u = rng.generator.random()
    return _inverse_gaussian_draw(mean, shape, nu, u)


def _inverse_gaussian_array(means, rng):
    # vectorized MSH with unit shape, one draw per mean
    means = np.asarray(means, dtype=float)
    nu = rng.generator.standard_normal(means.shape[0]) ** 2
    u = rng.generator.random(means.shape[0])
    t = means * nu
    s = np.sqrt(t * (t + 4.0))
    with np.errstate(invalid="ignore"):
        x = means * (1.0 - 2.0 * t / (t + s))
    x = np.where(t > 0.0, x, means)
    x = np.maximum(x, 5e-324)
    return np.where(u <= means / (means + x), x, means * means / x)


def gamma_sample(shape, rate, rng):
    """Gamma draw in the shape/rate convention (mean = shape/rate)."""
    if not (shape > 0 and rate > 0):
        raise ParameterError("gamma_sample requires shape > 0 and rate > 0")
    return rng.generator.gamma(shape, 1.0 / rate)


def inverse_gamma_sample(shape, rate, rng):
    """Inverse-gamma draw: reciprocal of Gamma(shape, rate); mean = rate/(shape-1)."""
    if not (shape > 0 and rate > 0):
        raise ParameterError("inverse_gamma_sample requires shape > 0 and rate > 0")
    return 1.0 / rng.generator.gamma(shape, 1.0 / rate)


def _squeeze_factor(alpha):
    # h(alpha) = 1 - alpha*m(alpha) for alpha >= 0; the direct difference
    # loses alpha^2 * eps, so the asymptotic series takes over for large alpha
    if alpha >= 50.0:
        inv2 = 1.0 / (alpha * alpha)
        return inv2 * (1.0 - inv2 * (3.0 - inv2 * (15.0 - 105.0 * inv2)))
    return 1.0 - alpha * _mills(alpha)


def trunc_normal_moments(mu, sigma, side, max_order=1):
    """Raw moments E[X^r], r = 1..max_order, of a one-sided truncated normal.

    X ~ N(mu, sigma^2) restricted to x > 0 (``side='positive'``) or x < 0
    (``side='negative'``). The first two moments are assembled from the
    Mill's-ratio squeeze factor h = 1 - alpha*m(alpha) (alpha = -mu/sigma
    in the reflected frame), which avoids the mu + sigma/m(alpha)
    cancellation and stays accurate for |mu|/sigma up to ~1e3; orders 3-4
    follow the upward recurrence
        m_k = mu m_{k-1} + (k-1) sigma^2 m_{k-2}
    and shed some figures in the extreme-squeeze regime.
    """
    if side not in ("positive", "negative"):
        raise ParameterError(f"side must be 'positive' or 'negative', got {side!r}")
    if not sigma > 0:
        raise ParameterError("sigma must be > 0")
    if not 1 <= max_order <= 4:
        raise ParameterError("max_order must be in [1, 4]")
    sign = 1.0 if side == "positive" else -1.0
    m = sign * float(mu)  # reflected problem is always truncated to x > 0
    alpha = -m / sigma
    if alpha > 0.0:
        # mass squeezed against the truncation point
        h = _squeeze_factor(alpha)
        m1 = sigma * alpha * h / (1.0 - h)
        m2 = sigma * sigma * ((1.0 - h) - alpha * alpha * h) / (1.0 - h)
    else:
        mills = _mills(alpha)
        hazard = 0.0 if math.isinf(mills) else 1.0 / mills
        m1 = m + sigma * hazard
        m2 = m * m1 + sigma * sigma
    moments = [1.0, m1, m2]
    for k in range(3, max_order + 1):
        moments.append(m * moments[k - 1] + (k - 1) * sigma * sigma * moments[k - 2])
    return [(sign ** r) * moments[r] for r in range(1, max_order + 1)]


def asymmetric_laplace_sample(b, c, rng):
    """Draw from the density proportional to exp(b*x - c*|x|).

    This is the zero-curvature limit of the Lasso family; it is proper
    only for c > |b|.
    """
    if not c > abs(b):
        raise ParameterError(
            f"asymmetric Laplace kernel requires c > |b|, got b={b!r}, c={c!r}"
        )
    w_neg = (c - b) / (2.0 * c)
    e = rng.generator.standard_exponential()
    if rng.generator.random() < w_neg:
        return -e / (b + c)
    return e / (c - b)


def slice_sample_step(log_density, current, config=SliceConfig(), rng=None):
    """One step-out/shrink slice-sampling update on (0, inf).

    Leaves ``log_density`` (an unnormalized log density) invariant. If the
    shrink budget is exhausted the current point is returned unchanged
    (stationarity is preserved) with a RuntimeWarning.
    """
    if rng is None:
        raise ParameterError("slice_sample_step requires an RngStream")
    x0 = float(current)
    f0 = log_density(x0)
    if not math.isfinite(f0):
        raise ParameterError(f"log_density must be finite at current={current!r}")
    gen = rng.generator

    def f(x):
        return log_density(x) if x > 0.0 else -math.inf

    log_y = f0 + math.log(gen.random())
    width = config.initial_width
    left = x0 - width * gen.random()
    right = left + width
    j = int(math.floor(config.max_stepout * gen.random()))
    k = (config.max_stepout - 1) - j
    while j > 0 and f(left) > log_y:
        left -= width
        j -= 1
    while k > 0 and f(right) > log_y:
        right += width
        k -= 1
    left = max(left, 0.0)
    for _ in range(config.max_shrink):
        x1 = left + gen.random() * (right - left)
        if f(x1) > log_y:
            return x1
        if x1 < x0:
            left = x1
        else:
            right = x1
    warnings.warn(
        "slice_sample_step exhausted its shrink budget; returning the "
        "current point",
        RuntimeWarning,
        stacklevel=2,
    )
    return x0
