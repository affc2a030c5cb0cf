import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from channelaging.models.channel.channel_model import (
    aged_csi,
    generate_channel,
    observe_and_estimate,
)
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.rng import Rng
from channelaging.models.predictor.wiener import (
    predict_channel,
    predictor_bank,
    simulate_observation_history,
    thetas as predictor_thetas,
)
from channelaging.models.uplink.detectors import (
    DetectorKind,
    build_detector,
    instantaneous_sinr_aged,
    instantaneous_sinr_predicted,
)
from channelaging.models.uplink.rate_report import CsiMode, RateReport, overhead_factor
from channelaging.pydantic_models.models import SystemConfig

logger = logging.getLogger(__name__)

# trial t always draws from Rng(seed, t); blocks only group trials for the worker pool
TRIAL_BLOCK = 256


class _TrialRunner:
    def __init__(
        self,
        config: SystemConfig,
        profile: FadingProfile,
        kind: DetectorKind,
        csi_mode: CsiMode,
        seed: int,
    ):
        self.config = config
        self.profile = profile
        self.kind = DetectorKind(kind)
        self.csi_mode = csi_mode
        self.seed = seed
        self.aging = config.aging()
        self.p_p = config.p_p
        self.states = None
        self.thetas = None
        if csi_mode.is_predicted:
            self.states = predictor_bank(csi_mode.pred_order, self.aging.alpha, profile.betas, self.p_p)
            self.thetas = predictor_thetas(self.states)

    def trial_sinr(self, trial: int) -> np.ndarray:
        rng = Rng(self.seed, trial)
        M, p_u = self.config.M, self.config.p_u
        if self.csi_mode.is_predicted:
            history, _ = simulate_observation_history(
                self.profile, M, self.aging, self.p_p, self.csi_mode.pred_order, rng
            )
            csi = predict_channel(history, self.states)
            detector = build_detector(csi, self.kind)
            return instantaneous_sinr_predicted(detector, csi, self.thetas, self.profile, self.aging, p_u)
        channel = generate_channel(self.profile, M, rng)
        realization = observe_and_estimate(channel, self.profile, self.p_p, rng)
        csi = aged_csi(realization.estimate, self.aging)
        detector = build_detector(csi, self.kind)
        return instantaneous_sinr_aged(detector, csi, self.profile, self.aging, p_u, self.p_p)

    def block_rates(self, start: int, stop: int) -> np.ndarray:
        rates = np.empty((stop - start, self.profile.K))
        for row, trial in enumerate(range(start, stop)):
            rates[row] = np.log1p(self.trial_sinr(trial)) / math.log(2.0)
        return rates


def monte_carlo_rate(
    config: SystemConfig,
    profile: FadingProfile,
    kind: DetectorKind,
    csi_mode: CsiMode,
    trials: int,
    seed: int,
    threads: int = 1,
) -> RateReport:
    """
    Ergodic per-user rates E{log2(1 + SINR_k)} by Monte Carlo.

    The result is bit-identical for any ``threads``: per-trial rates are
    assembled in trial order before the reductions.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    if profile.K != config.K:
        raise ValueError(f"profile has {profile.K} users, config has K={config.K}")
    if DetectorKind(kind) is DetectorKind.ZF and config.M < config.K:
        raise ValueError(f"ZF needs M >= K, got M={config.M}, K={config.K}")

    runner = _TrialRunner(config, profile, kind, csi_mode, seed)
    starts = list(range(0, trials, TRIAL_BLOCK))
    stops = [min(start + TRIAL_BLOCK, trials) for start in starts]
    logger.debug(
        "Monte Carlo %s/%s: M=%d K=%d trials=%d threads=%d",
        DetectorKind(kind).value, csi_mode, config.M, config.K, trials, threads,
    )
    if threads == 1:
        blocks: List[np.ndarray] = [runner.block_rates(a, b) for a, b in zip(starts, stops)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(runner.block_rates, starts, stops))
    rates = np.concatenate(blocks, axis=0)

    per_user = rates.mean(axis=0)
    sums = rates.sum(axis=1)
    if trials > 1:
        std_err = rates.std(axis=0, ddof=1) / math.sqrt(trials)
        sum_std_err = float(sums.std(ddof=1) / math.sqrt(trials))
    else:
        std_err = np.zeros(profile.K)
        sum_std_err = 0.0
    return RateReport(
        per_user_rate=per_user,
        std_err=std_err,
        trials=trials,
        csi_mode=csi_mode,
        overhead_factor=config.overhead_factor,
        sum_std_err_raw=sum_std_err,
    )


def sum_rate(report: RateReport, T: Optional[int], tau: int) -> float:
    """(T - tau) / T times the plain sum of the per-user rates."""
    return overhead_factor(T, tau) * float(np.sum(report.per_user_rate))
