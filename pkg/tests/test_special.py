import math
import pathlib

import numpy as np
import pytest
from scipy.special import erfcx, log_ndtr

from bayeslasso.exceptions import ParameterError
from bayeslasso.special import (
    MILLS_LARGE_X,
    MILLS_RATIO_COEFFICIENTS,
    SQRT_HALF_PI,
    log_mills_ratio,
    log_normal_cdf,
    mills_ratio,
    mills_ratio_positive,
    normal_quantile_from_log,
)

FIXTURE = pathlib.Path(__file__).parent / "fixtures" / "mills_oracle.npz"

# frozen from a 50-digit mpmath evaluation of sqrt(pi/2)*erfcx(x/sqrt(2))
M_AT_1 = 0.65567954241879847154
M_AT_MINUS_1 = 3.4770518117036944669
LOG_M_AT_MINUS_50 = 1250.9189385332046727
M_AT_600 = 0.0016666620370756167481
LOG_M_AT_600 = -6.3969324329746342875
LOG_PHI_AT_MINUS_10 = -53.231285150512470578
ROOT_LOG_PHI_MINUS_5000 = -99.944748174841092478


def phi(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def mills_oracle(x):
    return float(np.sqrt(np.pi / 2) * erfcx(x / np.sqrt(2)))


class TestRationalCoefficients:
    def test_counts(self):
        assert len(MILLS_RATIO_COEFFICIENTS.numerator) == 9
        assert len(MILLS_RATIO_COEFFICIENTS.denominator) == 10

    def test_monic_denominator(self):
        assert MILLS_RATIO_COEFFICIENTS.denominator[-1] == 1.0

    def test_leading_coefficients_positive(self):
        assert MILLS_RATIO_COEFFICIENTS.numerator[-1] > 0
        assert MILLS_RATIO_COEFFICIENTS.denominator[-1] > 0


class TestMillsRatioPositive:
    def test_at_zero(self):
        assert mills_ratio_positive(0.0) == pytest.approx(SQRT_HALF_PI, rel=1e-11)

    def test_reciprocal_branch(self):
        assert mills_ratio_positive(1e40) == 1e-40
        assert mills_ratio_positive(MILLS_LARGE_X) == 1.0 / MILLS_LARGE_X

    def test_at_one(self):
        assert mills_ratio_positive(1.0) == pytest.approx(M_AT_1, rel=1e-11)

    def test_at_600(self):
        assert mills_ratio_positive(600.0) == pytest.approx(M_AT_600, rel=1e-11)

    @pytest.mark.parametrize("bad", [-1.0, -1e-12, math.nan, math.inf])
    def test_domain_errors(self, bad):
        with pytest.raises(ParameterError):
            mills_ratio_positive(bad)

    def test_accuracy_subsample(self):
        data = np.load(FIXTURE)
        x, m = data["x_low"][::37], data["m_low"][::37]
        got = np.array([mills_ratio_positive(v) for v in x])
        assert np.max(np.abs(got - m) / m) <= 1e-11
        xh, mh = data["x_high"][::17], data["m_high"][::17]
        goth = np.array([mills_ratio_positive(v) for v in xh])
        assert np.max(np.abs(goth - mh) / mh) <= 1e-10


class TestMillsRatio:
    def test_at_zero(self):
        assert mills_ratio(0.0) == pytest.approx(SQRT_HALF_PI, rel=1e-11)

    def test_at_minus_one(self):
        assert mills_ratio(-1.0) == pytest.approx(M_AT_MINUS_1, rel=1e-11)

    def test_left_tail_limit(self):
        # m(x) * phi(x) = Phi(-x) -> 1 as x -> -inf
        for x in (-8.0, -15.0, -25.0, -36.0):
            assert mills_ratio(x) * phi(x) == pytest.approx(1.0, rel=1e-10)

    def test_overflow_sentinel_warns(self):
        with pytest.warns(RuntimeWarning, match="log_mills_ratio"):
            assert mills_ratio(-40.0) == math.inf

    def test_strictly_decreasing(self):
        xs = np.linspace(-30.0, 600.0, 2001)
        vals = np.array([mills_ratio(x) for x in xs])
        assert np.all(np.diff(vals) < 0)
        assert np.all(vals > 0)

    def test_reflection_recurrence(self):
        # m(x) = 1/phi(x) - m(-x) on [-8, 8]; asserted in the rearranged,
        # cancellation-free form (m(x) + m(-x)) * phi(x) = 1
        for x in np.linspace(-8.0, 8.0, 201):
            total = mills_ratio(x) + mills_ratio(-x)
            assert total * phi(x) == pytest.approx(1.0, rel=1e-10)
        # literal two-sided form where the subtraction is well conditioned
        for x in np.linspace(-4.0, 4.0, 101):
            lhs = mills_ratio(x)
            rhs = 1.0 / phi(x) - mills_ratio(-x)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_nonfinite_rejected(self):
        with pytest.raises(ParameterError):
            mills_ratio(math.inf)


class TestLogMillsRatio:
    def test_at_zero(self):
        assert log_mills_ratio(0.0) == pytest.approx(math.log(SQRT_HALF_PI), rel=1e-12)

    def test_deep_left_tail(self):
        assert log_mills_ratio(-50.0) == pytest.approx(LOG_M_AT_MINUS_50, rel=1e-13)

    def test_at_600(self):
        assert log_mills_ratio(600.0) == pytest.approx(LOG_M_AT_600, rel=1e-12)

    def test_agrees_with_linear_scale(self):
        for x in np.linspace(-35.0, 30.0, 131):
            assert log_mills_ratio(x) == pytest.approx(
                math.log(mills_ratio(x)), rel=1e-10
            )

    def test_finite_everywhere(self):
        for x in (-1e8, -1e4, -100.0, 0.0, 100.0, 1e4, 1e8, 1e300):
            assert math.isfinite(log_mills_ratio(x))


class TestLogNormalCdf:
    def test_matches_scipy(self):
        zs = np.concatenate([np.linspace(-300, 40, 341), [-37.5, -36.9, 0.0]])
        for z in zs:
            ours = log_normal_cdf(z)
            ref = float(log_ndtr(z))
            assert ours == pytest.approx(ref, rel=1e-12, abs=1e-300)

    def test_infinities(self):
        assert log_normal_cdf(math.inf) == 0.0
        assert log_normal_cdf(-math.inf) == -math.inf


class TestNormalQuantileFromLog:
    def test_median(self):
        assert normal_quantile_from_log(math.log(0.5)) == pytest.approx(0.0, abs=1e-15)

    def test_moderate_tail(self):
        assert normal_quantile_from_log(LOG_PHI_AT_MINUS_10) == pytest.approx(
            -10.0, rel=1e-8
        )

    def test_deep_tail(self):
        assert normal_quantile_from_log(-5000.0) == pytest.approx(
            ROOT_LOG_PHI_MINUS_5000, rel=1e-10
        )

    @pytest.mark.parametrize("q", [-1.0, -10.0, -100.0, -1e4, -1e6])
    def test_round_trip(self, q):
        x = normal_quantile_from_log(q)
        assert log_normal_cdf(x) == pytest.approx(q, rel=1e-8)

    def test_upper_half(self):
        # p = 0.975 -> 1.959963984540054 (standard two-sided 5% point)
        x = normal_quantile_from_log(math.log(0.975))
        assert x == pytest.approx(1.959963984540054, rel=1e-10)

    def test_sentinels(self):
        assert normal_quantile_from_log(0.0) == math.inf
        assert normal_quantile_from_log(-math.inf) == -math.inf

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            normal_quantile_from_log(0.1)
        with pytest.raises(ParameterError):
            normal_quantile_from_log(math.nan)
