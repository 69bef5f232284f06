"""The Lasso(a, b, c) distribution.

Density proportional to exp(-a x^2 / 2 + b x - c |x|) with a >= 0, c >= 0
and a, c not both zero. For a > 0 it is the mixture of two one-sided
truncated normals

    (1 - w) TN_+(mu1, sigma^2)  +  w TN_-(mu2, sigma^2),

mu1 = (b - c)/a, mu2 = (b + c)/a, sigma^2 = 1/a, where w is the mass of
the negative half-line. Every probability that can leave the double range
(normalizing constant, mixing weights, CDF ratios, quantile arguments) is
carried in log space, so the d/p/q/r surface stays finite and monotone for
parameters as extreme as a in [1e-6, 1e6] and |b|, c up to 1e4.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._jit import scalar_jit
from .exceptions import NumericalError, ParameterError, UnsupportedParameterError
from .samplers import trunc_normal_moments
from .special import _log_mills, _log_ndtr, _ndtri_from_log

__all__ = [
    "LassoParams",
    "MixtureRep",
    "ExpFamilyDecomposition",
    "LimitClass",
    "ClassifyTolerances",
    "make_mixture_rep",
    "lasso_pdf",
    "lasso_cdf",
    "lasso_quantile",
    "lasso_sample",
    "lasso_moment",
    "lasso_mgf",
    "lasso_mode",
    "exp_family_decomposition",
    "classify_limit",
]


@dataclass(frozen=True)
class LassoParams:
    """Parameter triple (a, b, c): quadratic, linear and |x| coefficients."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = float(self.a), float(self.b), float(self.c)
        if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
            raise ParameterError(f"parameters must be finite, got {self!r}")
        if a < 0 or c < 0:
            raise ParameterError(f"a and c must be nonnegative, got {self!r}")
        if a == 0 and c == 0:
            raise ParameterError("a and c must not both be zero")
        if a == 0 and c <= abs(b):
            raise ParameterError(
                f"with a = 0 the kernel is integrable only for c > |b|, got {self!r}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def require_positive_a(self, operation):
        if self.a <= 0:
            raise UnsupportedParameterError(
                f"{operation} requires a > 0; a = 0 is the (asymmetric) Laplace "
                "limit - see classify_limit and asymmetric_laplace_sample"
            )


@dataclass(frozen=True)
class MixtureRep:
    """Derived quantities of the two-truncated-normal representation.

    ``w`` and ``one_minus_w`` are each computed directly from the stable
    Mill's-ratio ratio rule (never as one minus the other) so that the
    smaller of the pair keeps full relative precision; the log fields are
    what the CDF/quantile tail arithmetic actually consumes.
    """

    mu1: float
    mu2: float
    sigma: float
    w: float
    one_minus_w: float
    log_Z: float
    v1: float
    v2: float
    log_w: float
    log_one_minus_w: float


class LimitClass(enum.Enum):
    GENERAL = "General"
    NORMAL = "Normal"
    LAPLACE = "Laplace"
    ASYMMETRIC_LAPLACE = "AsymmetricLaplace"
    POSITIVE_TRUNC_NORMAL = "PositiveTruncNormal"
    NEGATIVE_TRUNC_NORMAL = "NegativeTruncNormal"


@dataclass(frozen=True)
class ClassifyTolerances:
    """Thresholds for mapping parameter triples onto limiting families."""

    normal_ratio: float = 1e-12
    laplace_curvature: float = 1e-12
    trunc_tail_mass: float = 1e-300


@scalar_jit
def _mixture_core(a, b, c):
    # returns (v1, v2, mu1, mu2, sigma, log_Z, log_w, log_1mw); assumes a > 0
    ra = math.sqrt(a)
    v1 = (c - abs(b)) / ra
    v2 = (c + abs(b)) / ra
    lm1 = _log_mills(v1)
    lm2 = _log_mills(v2)
    if lm1 >= lm2:
        lsum = lm1 + math.log1p(math.exp(lm2 - lm1))
    else:
        lsum = lm2 + math.log1p(math.exp(lm1 - lm2))
    log_z = lsum - 0.5 * math.log(a)
    # w is the negative-half-line mass: the v1 ratio when b <= 0, the v2
    # ratio when b > 0; each of the pair is formed directly
    if b <= 0.0:
        log_w = lm1 - lsum
        log_1mw = lm2 - lsum
    else:
        log_w = lm2 - lsum
        log_1mw = lm1 - lsum
    mu1 = (b - c) / a
    mu2 = (b + c) / a
    sigma = 1.0 / ra
    return v1, v2, mu1, mu2, sigma, log_z, log_w, log_1mw


@scalar_jit
def _quantile_with_rep(u, mu1, mu2, sigma, log_w, log_1mw):
    # assumes 0 < u < 1; arguments of the normal quantile are assembled in
    # log space and clamped at their branch bound so boundary rounding can
    # never push them past the truncation point
    w = math.exp(log_w)
    if u <= w:
        bound = _log_ndtr(-mu2 / sigma)
        arg = bound + (math.log(u) - log_w)
        if arg > bound:
            arg = bound
        return mu2 + sigma * _ndtri_from_log(arg)
    bound = _log_ndtr(mu1 / sigma)
    arg = bound + (math.log1p(-u) - log_1mw)
    if arg > bound:
        arg = bound
    return mu1 - sigma * _ndtri_from_log(arg)


@scalar_jit
def _quantile_core(u, a, b, c):
    v1, v2, mu1, mu2, sigma, log_z, log_w, log_1mw = _mixture_core(a, b, c)
    return _quantile_with_rep(u, mu1, mu2, sigma, log_w, log_1mw)


@scalar_jit
def _sample_fill(out, a, b, c, gen):
    v1, v2, mu1, mu2, sigma, log_z, log_w, log_1mw = _mixture_core(a, b, c)
    for i in range(out.shape[0]):
        u = gen.random()
        while u <= 0.0:
            u = gen.random()
        out[i] = _quantile_with_rep(u, mu1, mu2, sigma, log_w, log_1mw)


def make_mixture_rep(params):
    """Build the truncated-normal mixture representation (requires a > 0)."""
    params.require_positive_a("make_mixture_rep")
    v1, v2, mu1, mu2, sigma, log_z, log_w, log_1mw = _mixture_core(
        params.a, params.b, params.c
    )
    if not (math.isfinite(v1) and math.isfinite(v2)):
        raise NumericalError(
            f"v1/v2 not representable for {params!r}; parameters are too extreme"
        )
    return MixtureRep(
        mu1=mu1,
        mu2=mu2,
        sigma=sigma,
        w=math.exp(log_w),
        one_minus_w=math.exp(log_1mw),
        log_Z=log_z,
        v1=v1,
        v2=v2,
        log_w=log_w,
        log_one_minus_w=log_1mw,
    )


def lasso_pdf(x, params, log_scale=False):
    """Density of Lasso(a, b, c) at x, or its log.

    The log form is -a x^2/2 + b x - c|x| - log Z with no intermediate
    exponentiation, so it is finite wherever the kernel is.
    """
    params.require_positive_a("lasso_pdf")
    xf = float(x)
    if not math.isfinite(xf):
        raise ParameterError(f"x must be finite, got {x!r}")
    _, _, _, _, _, log_z, _, _ = _mixture_core(params.a, params.b, params.c)
    logp = -0.5 * params.a * xf * xf + params.b * xf - params.c * abs(xf) - log_z
    return logp if log_scale else math.exp(logp)


def lasso_cdf(x, params, log_scale=False):
    """P(X < x) for Lasso(a, b, c), clamped to [0, 1].

    Both branch ratios are differences of log normal CDFs, so deep-tail
    results that underflow a double are still exact on the log scale
    (pass ``log_scale=True`` to retrieve them).
    """
    params.require_positive_a("lasso_cdf")
    xf = float(x)
    if math.isnan(xf):
        raise ParameterError("x must not be NaN")
    _, _, mu1, mu2, sigma, _, log_w, log_1mw = _mixture_core(
        params.a, params.b, params.c
    )
    if xf <= 0:
        # the ratio of normal CDFs is differenced before adding log w: the
        # two terms are close (and huge) in the tails, so this order keeps
        # the small result exact
        logp = log_w + (_log_ndtr((xf - mu2) / sigma) - _log_ndtr(-mu2 / sigma))
        logp = min(logp, 0.0)
        return logp if log_scale else math.exp(logp)
    log_sf = log_1mw + (_log_ndtr((mu1 - xf) / sigma) - _log_ndtr(mu1 / sigma))
    log_sf = min(log_sf, 0.0)
    sf = math.exp(log_sf)
    if log_scale:
        return math.log(-math.expm1(log_sf)) if sf < 1.0 else -math.inf
    return min(max(-math.expm1(log_sf), 0.0), 1.0)


def lasso_quantile(u, params):
    """Inverse CDF. u = 0 and u = 1 map to the -inf/+inf sentinels.

    The four cases (u vs w, sign of b) are resolved through the stable
    (w, 1 - w) pair; quantile arguments near either tail are assembled in
    log space and inverted with the log-scale normal quantile.
    """
    params.require_positive_a("lasso_quantile")
    uf = float(u)
    if math.isnan(uf) or uf < 0.0 or uf > 1.0:
        raise ParameterError(f"u must lie in [0, 1], got {u!r}")
    if uf == 0.0:
        return -math.inf
    if uf == 1.0:
        return math.inf
    return _quantile_core(uf, params.a, params.b, params.c)


def lasso_sample(n, params, rng):
    """n independent inverse-CDF draws, deterministic given the stream seed."""
    params.require_positive_a("lasso_sample")
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n!r}")
    out = np.empty(int(n), dtype=float)
    if n:
        _sample_fill(out, params.a, params.b, params.c, rng.generator)
    return out


def lasso_moment(r, params):
    """Raw moment E[X^r], r in 1..4, via the truncated-normal mixture."""
    params.require_positive_a("lasso_moment")
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool):
        raise ParameterError(f"r must be an integer, got {r!r}")
    if r < 1 or r > 4:
        raise ParameterError(f"moment order must be in [1, 4], got {r}")
    rep = make_mixture_rep(params)
    pos = trunc_normal_moments(rep.mu1, rep.sigma, "positive", max_order=r)
    neg = trunc_normal_moments(rep.mu2, rep.sigma, "negative", max_order=r)
    return rep.one_minus_w * pos[r - 1] + rep.w * neg[r - 1]


def lasso_mgf(t, params):
    """Moment generating function M(t) = Z(a, b + t, c) / Z(a, b, c)."""
    params.require_positive_a("lasso_mgf")
    tf = float(t)
    if not math.isfinite(tf):
        raise ParameterError(f"t must be finite, got {t!r}")
    *_, log_z_shift, _, _ = _mixture_core(params.a, params.b + tf, params.c)
    *_, log_z, _, _ = _mixture_core(params.a, params.b, params.c)
    return math.exp(log_z_shift - log_z)


def lasso_mode(params):
    """Mode: max(|b| - c, 0) * sign(b) / a."""
    params.require_positive_a("lasso_mode")
    peak = max(abs(params.b) - params.c, 0.0)
    sign = 0.0 if params.b == 0 else math.copysign(1.0, params.b)
    return peak * sign / params.a


@dataclass(frozen=True)
class ExpFamilyDecomposition:
    """Exponential-family form exp(nu . T(x) - A) with T(x) = (x^2, x, |x|)."""

    natural_params: tuple
    log_partition: float

    @staticmethod
    def sufficient_stat(x):
        return (x * x, x, abs(x))

    def log_density(self, x):
        t = self.sufficient_stat(float(x))
        return (
            self.natural_params[0] * t[0]
            + self.natural_params[1] * t[1]
            + self.natural_params[2] * t[2]
            - self.log_partition
        )


def exp_family_decomposition(params):
    """Natural parameters (-a/2, b, -c) and log-partition (= log Z)."""
    params.require_positive_a("exp_family_decomposition")
    rep = make_mixture_rep(params)
    return ExpFamilyDecomposition(
        natural_params=(-0.5 * params.a, params.b, -params.c),
        log_partition=rep.log_Z,
    )


def classify_limit(params, tolerances=ClassifyTolerances()):
    """Map (a, b, c) onto the limiting family it numerically behaves like.

    Accepts a = 0 (exact Laplace/asymmetric-Laplace case); for a > 0 the
    checks run in order: negligible |x| penalty -> Normal, negligible
    curvature -> Laplace family, vanishing one-sided mass -> truncated
    normal, otherwise General.
    """
    a, b, c = params.a, params.b, params.c
    if a == 0:
        return LimitClass.LAPLACE if b == 0 else LimitClass.ASYMMETRIC_LAPLACE
    sigma = 1.0 / math.sqrt(a)
    if c * sigma < tolerances.normal_ratio * (1.0 + abs(b) * sigma):
        return LimitClass.NORMAL
    if c > abs(b) and a / max(b * b, c * c) < tolerances.laplace_curvature:
        return LimitClass.LAPLACE if b == 0 else LimitClass.ASYMMETRIC_LAPLACE
    rep = make_mixture_rep(params)
    log_thresh = math.log(tolerances.trunc_tail_mass)
    if rep.log_w < log_thresh:
        return LimitClass.POSITIVE_TRUNC_NORMAL
    if rep.log_one_minus_w < log_thresh:
        return LimitClass.NEGATIVE_TRUNC_NORMAL
    return LimitClass.GENERAL
