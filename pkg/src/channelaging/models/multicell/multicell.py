"""
Multi-cell rates under pilot contamination with p_u = E_u / M^gamma.

Only the large-M expressions are evaluated; there is no multi-cell Monte Carlo.
"""
import math
from enum import Enum

import numpy as np

from channelaging.models.bounds.asymptotics import prediction_gain
from channelaging.pydantic_models.models import MultiCellConfig


class MulticellRegime(str, Enum):
    GAMMA_HALF = "gamma_half"
    GAMMA_SUB_HALF = "gamma_sub_half"
    GAMMA_SUPER_HALF = "gamma_super_half"

    @classmethod
    def for_gamma(cls, gamma: float) -> "MulticellRegime":
        if math.isclose(gamma, 0.5, abs_tol=1e-12):
            return cls.GAMMA_HALF
        return cls.GAMMA_SUB_HALF if gamma < 0.5 else cls.GAMMA_SUPER_HALF


class CsiKind(str, Enum):
    AGED = "aged"
    PREDICTED = "predicted"


def _terms(config: MultiCellConfig):
    table = config.beta_table()
    b, k = config.serving_cell, config.user
    beta_bbk = table[b, k]
    everyone_else = np.sum(table) - beta_bbk
    contaminating = np.sum(np.delete(table[:, k], b) ** 2)
    return beta_bbk, everyone_else, contaminating


def _rate(config: MultiCellConfig, M: int, signal_gain: float, contamination_gain: float) -> float:
    if not config.gamma > 0.0:
        raise ValueError(f"gamma must be > 0, got {config.gamma}")
    beta_bbk, everyone_else, contaminating = _terms(config)
    a2 = config.alpha**2
    E_u, tau, gamma = config.E_u, config.tau, config.gamma
    power = E_u / float(M) ** gamma
    coherent = tau * E_u**2 / float(M) ** (2.0 * gamma - 1.0)

    numerator = a2 * signal_gain * coherent * beta_bbk**2
    denominator = (
        beta_bbk * power
        + 1.0
        + everyone_else * power
        + a2 * contamination_gain * coherent * contaminating
    )
    return math.log2(1.0 + numerator / denominator)


def multicell_rate_aged(config: MultiCellConfig, M: int) -> float:
    return _rate(config, M, 1.0, 1.0)


def multicell_rate_predicted(config: MultiCellConfig, M: int) -> float:
    """Predicted-CSI rate; the contamination term carries an extra alpha^(2p)."""
    gain = prediction_gain(config.alpha, config.pred_order)
    return _rate(config, M, gain, gain * config.alpha ** (2 * config.pred_order))


def multicell_limit(config: MultiCellConfig, regime: MulticellRegime, mode: CsiKind) -> float:
    regime = MulticellRegime(regime)
    mode = CsiKind(mode)
    if regime is MulticellRegime.GAMMA_SUB_HALF and config.C < 2:
        raise ValueError("the gamma < 1/2 limit is unbounded without inter-cell contamination (C=1)")
    if regime is MulticellRegime.GAMMA_SUPER_HALF or config.alpha == 0.0:
        return 0.0

    beta_bbk, _, contaminating = _terms(config)
    a2 = config.alpha**2
    p = config.pred_order
    if mode is CsiKind.PREDICTED:
        signal_gain = prediction_gain(config.alpha, p)
        contamination_gain = signal_gain * config.alpha ** (2 * p)
    else:
        signal_gain = contamination_gain = 1.0

    if regime is MulticellRegime.GAMMA_SUB_HALF:
        # alpha^2 divides out of the aged limit
        return math.log2(1.0 + signal_gain * beta_bbk**2 / (contamination_gain * contaminating))

    coherent = a2 * config.tau * config.E_u**2
    return math.log2(
        1.0 + signal_gain * coherent * beta_bbk**2 / (1.0 + contamination_gain * coherent * contaminating)
    )
