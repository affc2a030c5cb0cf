import math

import numpy as np
import pytest

from channelaging.models.channel.channel_model import AgingParams, aged_csi, generate_channel, observe_and_estimate
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.downlink.mrt import (
    downlink_moment_oracle,
    downlink_monte_carlo_rate,
    downlink_rate_closed_form,
    downlink_rate_from_moments,
    downlink_report,
    downlink_scaling_limit,
    mrt_lambda,
)
from channelaging.models.kernel.rng import Rng
from channelaging.pydantic_models.models import DownlinkConfig

ALPHA = 0.9037129
SPREAD = list(np.linspace(0.3, 1.0, 10))


def single_user(**update):
    values = dict(M=64, K=1, p_b=10.0, p_p=10.0, alpha=ALPHA, betas=[1.0])
    values.update(update)
    return DownlinkConfig(**values)


def test_lambda_of_unit_sigma():
    config = DownlinkConfig(M=1, K=1, p_p=0.5, alpha=1.0, betas=[2.0])
    assert config.sigma2()[0] == pytest.approx(1.0)
    assert mrt_lambda(config) == pytest.approx(1.0)


def test_lambda_example():
    assert mrt_lambda(single_user()) == pytest.approx(0.14506, abs=1e-5)


def test_lambda_shrinks_with_antennas():
    base = mrt_lambda(single_user(M=64))
    assert mrt_lambda(single_user(M=256)) == pytest.approx(base / 2.0)


def test_lambda_needs_signal():
    with pytest.raises(ValueError):
        mrt_lambda(single_user(alpha=0.0))


def test_closed_form_example():
    assert downlink_rate_closed_form(single_user(), 0) == pytest.approx(5.466, abs=1e-3)


def test_closed_form_without_correlation():
    config = DownlinkConfig(M=64, K=10, alpha=0.0, betas=SPREAD)
    assert all(downlink_rate_closed_form(config, k) == 0.0 for k in range(10))


def test_closed_form_power_ceiling():
    config = DownlinkConfig(M=64, K=10, p_b=1e12, alpha=ALPHA, betas=SPREAD)
    sigma2 = config.sigma2()
    for k in range(10):
        ceiling = math.log2(1.0 + ALPHA**2 * 64 * sigma2[k] ** 2 / (SPREAD[k] * np.sum(sigma2)))
        assert downlink_rate_closed_form(config, k) == pytest.approx(ceiling, rel=1e-9)


def test_closed_form_monotonicity():
    def rate(**update):
        values = dict(M=64, K=10, p_b=10.0, alpha=ALPHA, betas=SPREAD)
        values.update(update)
        return downlink_rate_closed_form(DownlinkConfig(**values), 0)

    assert rate(p_b=1.0) < rate(p_b=10.0) < rate(p_b=100.0)
    assert rate(M=32) < rate(M=64) < rate(M=128)
    assert rate(K=11, betas=SPREAD + [1.0]) < rate()


def test_closed_form_rejects_user():
    with pytest.raises(ValueError):
        downlink_rate_closed_form(single_user(), 1)


def test_scaling_limit_example():
    limit = downlink_scaling_limit(10.0, 10**0.3, 10, ALPHA, np.ones(10), 0.5, 64, 0)
    assert limit == pytest.approx(4.11, abs=0.01)
    assert downlink_scaling_limit(10.0, 10**0.3, 10, ALPHA, np.ones(10), 0.5, 2**20, 0) == pytest.approx(limit)
    assert downlink_scaling_limit(10.0, 10**0.3, 10, ALPHA, np.ones(10), 0.75, 2**60, 0) < 1e-2


def test_scaled_config_powers():
    base = single_user(E_b=10.0, beta_exp=0.5)
    scaled = base.scaled(256, 1, 2.0)
    assert scaled.M == 256
    assert scaled.p_b == pytest.approx(0.625, rel=1e-15)
    assert scaled.p_p == pytest.approx(0.125, rel=1e-15)
    assert (scaled.E_b, scaled.beta_exp, scaled.betas) == (10.0, 0.5, [1.0])
    assert base.M == 64
    assert single_user(E_b=10.0, beta_exp=1.0).scaled(256, 1, 2.0).p_b == pytest.approx(10.0 / 256, rel=1e-15)


@pytest.mark.parametrize("beta_exp", [0.0, -0.5])
def test_scaling_limit_rejects_exponent(beta_exp):
    with pytest.raises(ValueError):
        downlink_scaling_limit(10.0, 2.0, 10, ALPHA, np.ones(10), beta_exp, 64, 0)


def test_oracle_without_correlation_is_zero():
    config = DownlinkConfig(M=8, K=3, alpha=0.0, betas=[1.0, 0.5, 0.2])
    moments = downlink_moment_oracle(config, 50, seed=1)
    assert moments.mean_gain == 0.0
    assert moments.gain_variance == 0.0
    np.testing.assert_array_equal(moments.interference, np.zeros(2))


def test_oracle_single_user_has_no_interference():
    moments = downlink_moment_oracle(single_user(M=8), 50, seed=2)
    assert moments.interference.shape == (0,)
    assert moments.interference_total == 0.0
    assert moments.trials == 50


def test_oracle_rejects_bad_arguments():
    with pytest.raises(ValueError):
        downlink_moment_oracle(single_user(), 0, seed=1)
    with pytest.raises(ValueError):
        downlink_moment_oracle(single_user(), 10, seed=1, k=1)


def test_oracle_is_seeded():
    config = DownlinkConfig(M=8, K=3, alpha=ALPHA, betas=[1.0, 0.5, 0.2])
    a = downlink_moment_oracle(config, 1500, seed=3, k=1)
    b = downlink_moment_oracle(config, 1500, seed=3, k=1)
    assert a.mean_gain == b.mean_gain
    np.testing.assert_array_equal(a.interference, b.interference)


@pytest.mark.slow
def test_oracle_moments_match_closed_form():
    config = DownlinkConfig(M=64, K=10, p_p=10.0, alpha=0.9037, betas=SPREAD)
    sigma2 = config.sigma2()
    a2, M, k = config.alpha**2, config.M, 3
    moments = downlink_moment_oracle(config, 20000, seed=4, k=k)

    assert abs(moments.mean_gain - a2 * M * sigma2[k]) <= 4 * moments.mean_gain_std_err
    assert abs(moments.gain_variance - a2 * M * sigma2[k] * SPREAD[k]) <= 4 * moments.gain_variance_std_err
    expected = a2 * M * SPREAD[k] * np.delete(sigma2, k)
    assert np.all(np.abs(moments.interference - expected) <= 4 * moments.interference_std_err)


def test_rate_from_moments_matches_closed_form():
    config = DownlinkConfig(M=64, K=10, p_p=10.0, alpha=ALPHA, betas=SPREAD)
    for k in (0, 9):
        moments = downlink_moment_oracle(config, 5000, seed=5, k=k)
        expected = downlink_rate_closed_form(config, k)
        assert downlink_rate_from_moments(moments, config) == pytest.approx(expected, rel=0.03)


def test_precoder_meets_power_constraint():
    config = DownlinkConfig(M=32, K=10, p_p=10.0, alpha=ALPHA, betas=SPREAD)
    profile = FadingProfile.from_betas(SPREAD)
    rng = Rng(6)
    channel = generate_channel(profile, config.M, rng, batch=(4000,))
    csi = aged_csi(observe_and_estimate(channel, profile, config.p_p, rng).estimate, AgingParams.from_alpha(ALPHA))
    power = mrt_lambda(config) ** 2 * np.sum(np.abs(csi) ** 2, axis=(1, 2))
    assert power.mean() == pytest.approx(1.0, rel=0.01)


def test_monte_carlo_rate_report():
    config = DownlinkConfig(M=64, K=10, p_p=10.0, alpha=ALPHA, betas=SPREAD)
    report = downlink_monte_carlo_rate(config, 4000, seed=7)
    closed = downlink_report(config)
    assert report.trials == 4000
    assert np.all(report.std_err > 0.0)
    assert report.sum_std_err > 0.0
    assert report.sum_rate == pytest.approx(closed.sum_rate, rel=0.03)
    assert closed.trials == 0
    assert not np.any(closed.std_err)


def test_monte_carlo_rate_with_few_trials():
    config = DownlinkConfig(M=8, K=2, alpha=ALPHA, betas=[1.0, 0.5])
    report = downlink_monte_carlo_rate(config, 10, seed=8)
    assert not np.any(report.std_err)
    assert report.sum_std_err == 0.0
    assert np.all(report.per_user_rate >= 0.0)
