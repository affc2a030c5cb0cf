"""
Closed-form lower bounds on the uplink rate of user k.

Every bound is evaluated in linear power units with p_p = tau * p_u.
"""
import math
from typing import Sequence

import numpy as np

from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.predictor.wiener import predictor_bank, thetas as predictor_thetas
from channelaging.models.uplink.detectors import DetectorKind
from channelaging.models.uplink.rate_report import CsiMode
from channelaging.pydantic_models.models import SystemConfig


def _check(config: SystemConfig, profile: FadingProfile, k: int):
    if profile.K != config.K:
        raise ValueError(f"profile has {profile.K} users, config has K={config.K}")
    if not 0 <= k < config.K:
        raise ValueError(f"user index {k} out of range for K={config.K}")


def _check_mrc(config: SystemConfig):
    if config.M < 2:
        raise ValueError(f"MRC bounds need M >= 2, got M={config.M}")


def _check_zf(config: SystemConfig):
    if config.M <= config.K:
        raise ValueError(f"ZF bounds need M > K, got M={config.M}, K={config.K}")


def _thetas(thetas: Sequence[float], profile: FadingProfile) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.shape != profile.betas.shape:
        raise ValueError(f"need {profile.K} thetas, got shape {thetas.shape}")
    return thetas


def mrc_bound_aged(config: SystemConfig, profile: FadingProfile, k: int) -> float:
    _check(config, profile, k)
    _check_mrc(config)
    betas, beta_k = profile.betas, profile.betas[k]
    a2 = config.aging().alpha ** 2
    tau, p_u, M = config.tau, config.p_u, config.M

    others = np.sum(np.delete(betas, k))
    b_mrc = (1.0 - a2) * tau * p_u**2 * beta_k**2
    numerator = a2 * tau * p_u**2 * (M - 1) * beta_k**2
    denominator = p_u * (1.0 + tau * p_u * beta_k) * others + (tau + 1) * p_u * beta_k + 1.0 + b_mrc
    return math.log2(1.0 + numerator / denominator)


def zf_bound_aged(config: SystemConfig, profile: FadingProfile, k: int) -> float:
    _check(config, profile, k)
    _check_zf(config)
    betas, beta_k = profile.betas, profile.betas[k]
    a2 = config.aging().alpha ** 2
    tau, p_u, M, K = config.tau, config.p_u, config.M, config.K

    residual = np.sum(p_u * betas / (tau * p_u * betas + 1.0))
    b_zf = (1.0 - a2) * (1.0 + tau * p_u * beta_k) * np.sum(tau * p_u**2 * betas**2 / (1.0 + tau * p_u * betas))
    numerator = a2 * tau * p_u**2 * (M - K) * beta_k**2
    denominator = (1.0 + tau * p_u * beta_k) * residual + tau * p_u * beta_k + 1.0 + b_zf
    return math.log2(1.0 + numerator / denominator)


def mrc_bound_predicted(config: SystemConfig, profile: FadingProfile, thetas: Sequence[float], k: int) -> float:
    _check(config, profile, k)
    _check_mrc(config)
    thetas = _thetas(thetas, profile)
    a2 = config.aging().alpha ** 2
    p_u, M = config.p_u, config.M

    interference = p_u * a2 * np.sum(np.delete(thetas, k))
    error_floor = p_u * np.sum(profile.betas - a2 * thetas)
    numerator = p_u * (M - 1) * a2 * thetas[k]
    return math.log2(1.0 + numerator / (interference + error_floor + 1.0))


def zf_bound_predicted(config: SystemConfig, profile: FadingProfile, thetas: Sequence[float], k: int) -> float:
    _check(config, profile, k)
    _check_zf(config)
    thetas = _thetas(thetas, profile)
    a2 = config.aging().alpha ** 2
    p_u, M, K = config.p_u, config.M, config.K

    error_floor = p_u * np.sum(profile.betas - a2 * thetas)
    numerator = p_u * (M - K) * a2 * thetas[k]
    return math.log2(1.0 + numerator / (error_floor + 1.0))


def mrc_bound_perfect(config: SystemConfig, profile: FadingProfile, k: int) -> float:
    """Perfect-CSI MRC reference: no aging and no estimation error."""
    _check(config, profile, k)
    _check_mrc(config)
    p_u, beta_k = config.p_u, profile.betas[k]
    others = np.sum(np.delete(profile.betas, k))
    return math.log2(1.0 + p_u * (config.M - 1) * beta_k / (p_u * others + 1.0))


def zf_bound_perfect(config: SystemConfig, profile: FadingProfile, k: int) -> float:
    _check(config, profile, k)
    _check_zf(config)
    return math.log2(1.0 + config.p_u * (config.M - config.K) * profile.betas[k])


def sum_rate_bound(
    config: SystemConfig,
    profile: FadingProfile,
    kind: DetectorKind,
    csi_mode: CsiMode,
) -> float:
    """Overhead-weighted sum over users of the matching per-user bound."""
    kind = DetectorKind(kind)
    if csi_mode.is_predicted:
        states = predictor_bank(csi_mode.pred_order, config.aging().alpha, profile.betas, config.p_p)
        thetas = predictor_thetas(states)
        bound = mrc_bound_predicted if kind is DetectorKind.MRC else zf_bound_predicted
        rates = [bound(config, profile, thetas, k) for k in range(profile.K)]
    else:
        bound = mrc_bound_aged if kind is DetectorKind.MRC else zf_bound_aged
        rates = [bound(config, profile, k) for k in range(profile.K)]
    return config.overhead_factor * math.fsum(rates)


def sum_rate_bound_perfect(config: SystemConfig, profile: FadingProfile, kind: DetectorKind) -> float:
    bound = mrc_bound_perfect if DetectorKind(kind) is DetectorKind.MRC else zf_bound_perfect
    return config.overhead_factor * math.fsum(bound(config, profile, k) for k in range(profile.K))
