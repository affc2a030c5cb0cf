import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from channelaging.models.channel.channel_model import (
    AgingParams,
    age_channel,
    aged_csi,
    generate_channel,
    observe_and_estimate,
)
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.rng import Rng
from channelaging.models.uplink.rate_report import CsiMode, RateReport
from channelaging.pydantic_models.models import DownlinkConfig

logger = logging.getLogger(__name__)

# trials per random stream in the moment oracle
ORACLE_BLOCK = 1000
# batches used for the batch-means standard error of oracle rates
RATE_BATCHES = 20


@dataclass
class DownlinkMoments:
    """Monte Carlo estimates of the three expectations behind the MRT rate of user k."""

    k: int
    trials: int
    mean_gain: float
    gain_variance: float
    # E|g_k^T conj(gbar_i)|^2 for every i != k, in user order
    interference: np.ndarray
    mean_gain_std_err: float
    gain_variance_std_err: float
    interference_std_err: np.ndarray
    interference_total_std_err: float

    @property
    def interference_total(self) -> float:
        return float(np.sum(self.interference))


def _check_user(config: DownlinkConfig, k: int):
    if not 0 <= k < config.K:
        raise ValueError(f"user index {k} out of range for K={config.K}")


def mrt_lambda(config: DownlinkConfig) -> float:
    """Power normalization so that E||W x||^2 = 1."""
    total = config.M * config.alpha**2 * float(np.sum(config.sigma2()))
    if not total > 0.0:
        raise ValueError("MRT normalization needs alpha != 0 and at least one beta_k > 0")
    return math.sqrt(1.0 / total)


def downlink_rate_closed_form(config: DownlinkConfig, k: int) -> float:
    _check_user(config, k)
    sigma2 = config.sigma2()
    if config.alpha == 0.0:
        return 0.0
    beta_k = config.betas[k]
    snr = config.alpha**2 * config.M * sigma2[k] ** 2 / ((beta_k + 1.0 / config.p_b) * np.sum(sigma2))
    return math.log2(1.0 + snr)


def downlink_scaling_limit(
    E_b: float,
    E_u: float,
    tau: int,
    alpha: float,
    betas: Sequence[float],
    beta_exp: float,
    M: int,
    k: int,
) -> float:
    """Large-M equivalent of the MRT rate with p_p = tau E_u / sqrt(M) and p_b = E_b / M^beta_exp."""
    if not beta_exp > 0.0:
        raise ValueError(f"beta_exp must be > 0, got {beta_exp}")
    betas = np.asarray(betas, dtype=np.float64)
    snr = alpha**2 * tau * E_u * E_b * betas[k] ** 4 / (float(M) ** (beta_exp - 0.5) * np.sum(betas**2))
    return math.log2(1.0 + snr)


def _cross_gains(config: DownlinkConfig, trials: int, seed: int) -> np.ndarray:
    """
    cross[t, k, i] = g_k[n+1]^T conj(gbar_i[n+1]) for ``trials`` fresh draws:
    estimate the channel, age it by one step, correlate with the aged CSI.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    profile = FadingProfile.from_betas(config.betas)
    aging = AgingParams.from_alpha(config.alpha)
    blocks = []
    for block, start in enumerate(range(0, trials, ORACLE_BLOCK)):
        count = min(ORACLE_BLOCK, trials - start)
        rng = Rng(seed, block)
        channel = generate_channel(profile, config.M, rng, batch=(count,))
        realization = observe_and_estimate(channel, profile, config.p_p, rng)
        csi = aged_csi(realization.estimate, aging)
        next_channel = age_channel(channel, aging, profile, rng)
        blocks.append(np.einsum("tmk,tmi->tki", next_channel, csi.conj()))
    return np.concatenate(blocks, axis=0)


def _moments(cross: np.ndarray, k: int) -> DownlinkMoments:
    trials = cross.shape[0]
    n = math.sqrt(trials)
    ddof = 1 if trials > 1 else 0
    gain = cross[:, k, k]
    mean = gain.mean()
    deviation = np.abs(gain - mean) ** 2
    others = np.delete(np.abs(cross[:, k, :]) ** 2, k, axis=1)
    gain_variance = float(deviation.sum() / max(trials - ddof, 1))
    return DownlinkMoments(
        k=k,
        trials=trials,
        mean_gain=float(mean.real),
        gain_variance=gain_variance,
        interference=others.mean(axis=0),
        mean_gain_std_err=float(gain.real.std(ddof=ddof) / n),
        gain_variance_std_err=float(deviation.std(ddof=ddof) / n),
        interference_std_err=others.std(axis=0, ddof=ddof) / n,
        interference_total_std_err=float(others.sum(axis=1).std(ddof=ddof) / n),
    )


def downlink_moment_oracle(config: DownlinkConfig, trials: int, seed: int, k: int = 0) -> DownlinkMoments:
    _check_user(config, k)
    return _moments(_cross_gains(config, trials, seed), k)


def downlink_sinr_from_moments(moments: DownlinkMoments, config: DownlinkConfig) -> float:
    """mean^2 / (variance + interference + 1 / (p_b lambda^2))."""
    noise = 1.0 / (config.p_b * mrt_lambda(config) ** 2)
    return moments.mean_gain**2 / (moments.gain_variance + moments.interference_total + noise)


def downlink_rate_from_moments(moments: DownlinkMoments, config: DownlinkConfig) -> float:
    return math.log2(1.0 + downlink_sinr_from_moments(moments, config))


def _rates_from_cross(cross: np.ndarray, config: DownlinkConfig) -> np.ndarray:
    return np.array([downlink_rate_from_moments(_moments(cross, k), config) for k in range(config.K)])


def downlink_monte_carlo_rate(config: DownlinkConfig, trials: int, seed: int) -> RateReport:
    """
    Per-user MRT rates assembled from oracle moments; standard errors come
    from batch means over RATE_BATCHES contiguous groups of trials.
    """
    cross = _cross_gains(config, trials, seed)
    rates = _rates_from_cross(cross, config)
    std_err = np.zeros(config.K)
    sum_std_err = 0.0
    if trials >= 2 * RATE_BATCHES:
        batches = np.array([_rates_from_cross(part, config) for part in np.array_split(cross, RATE_BATCHES)])
        root = math.sqrt(RATE_BATCHES)
        std_err = batches.std(axis=0, ddof=1) / root
        sum_std_err = float(batches.sum(axis=1).std(ddof=1) / root)
    else:
        logger.warning("Only %d trials; downlink standard errors reported as 0", trials)
    return RateReport(
        per_user_rate=rates,
        std_err=std_err,
        trials=trials,
        csi_mode=CsiMode.aged(),
        sum_std_err_raw=sum_std_err,
    )


def downlink_report(config: DownlinkConfig) -> RateReport:
    rates = np.array([downlink_rate_closed_form(config, k) for k in range(config.K)])
    return RateReport(
        per_user_rate=rates,
        std_err=np.zeros(config.K),
        trials=0,
        csi_mode=CsiMode.aged(),
    )
