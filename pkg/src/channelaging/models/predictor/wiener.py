import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg

from channelaging.models.channel.channel_model import (
    AgingParams,
    age_channel,
    generate_channel,
    observe_and_estimate,
)
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.linalg import hermitian_solve
from channelaging.models.kernel.rng import Rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredictorState:
    """Reduced-space Wiener predictor of one user, valid for any M."""

    order: int
    alpha: float
    beta: float
    p_p: float
    # per-lag weights, most recent observation first
    weights: np.ndarray
    theta: float
    mse_per_entry: float


def correlation_vector(order: int, alpha: float) -> np.ndarray:
    """delta(p, alpha) = [1, alpha, ..., alpha^p]."""
    return float(alpha) ** np.arange(order + 1)


def correlation_matrix(order: int, alpha: float) -> np.ndarray:
    """Delta(p, alpha): Toeplitz with entries alpha^|i-j|."""
    return scipy.linalg.toeplitz(correlation_vector(order, alpha))


def _check_inputs(order: int, beta: float, p_p: float):
    if order < 0:
        raise ValueError(f"predictor order must be >= 0, got {order}")
    if not beta > 0.0:
        raise ValueError(f"beta must be > 0, got {beta}")
    if not p_p > 0.0 or not np.isfinite(p_p):
        raise ValueError(f"p_p must be finite and > 0, got {p_p}")


def wiener_coefficients(order: int, alpha: float, beta: float, p_p: float) -> PredictorState:
    """
    Optimal order-p linear predictor of g[n+1] from the noisy observations
    y[n], ..., y[n-p].

    The M(p+1)-dimensional problem is a Kronecker product with I_M, so it is
    solved in (p+1) dimensions with A = beta Delta + I / p_p.
    """
    _check_inputs(order, beta, p_p)
    delta = correlation_vector(order, alpha)
    A = beta * correlation_matrix(order, alpha) + np.eye(order + 1) / p_p
    solved = hermitian_solve(A, delta)
    weights = alpha * beta * solved
    theta = float(beta**2 * delta @ solved)
    mse = max(beta - alpha**2 * theta, 0.0)
    return PredictorState(
        order=order,
        alpha=float(alpha),
        beta=float(beta),
        p_p=float(p_p),
        weights=weights,
        theta=theta,
        mse_per_entry=mse,
    )


def predictor_bank(order: int, alpha: float, betas: Sequence[float], p_p: float) -> List[PredictorState]:
    return [wiener_coefficients(order, alpha, float(beta), p_p) for beta in betas]


def thetas(states: Sequence[PredictorState]) -> np.ndarray:
    return np.array([state.theta for state in states])


def dense_theta(order: int, alpha: float, beta: float, p_p: float, M: int) -> np.ndarray:
    """Theta_k built explicitly in M(p+1) dimensions (no Kronecker reduction)."""
    _check_inputs(order, beta, p_p)
    delta = correlation_vector(order, alpha)
    eye = np.eye(M)
    T = beta * np.kron(correlation_matrix(order, alpha), eye) + np.eye(M * (order + 1)) / p_p
    D = np.kron(delta[None, :], eye)
    return beta**2 * D @ hermitian_solve(T, D.T)


def predict_channel(history: Sequence[np.ndarray], states: Sequence[PredictorState]) -> np.ndarray:
    """Per-user weighted sum of the observation history (most recent first)."""
    if not states:
        raise ValueError("need one predictor state per user")
    order = states[0].order
    if any(state.order != order for state in states):
        raise ValueError("all predictor states must share the same order")
    if len(history) != order + 1:
        raise ValueError(f"history has {len(history)} observations, order {order} needs {order + 1}")
    stacked = np.stack(history, axis=0)
    if stacked.shape[-1] != len(states):
        raise ValueError(f"history has {stacked.shape[-1]} users, got {len(states)} predictor states")
    weights = np.stack([state.weights for state in states], axis=1)
    weights = weights.reshape((order + 1,) + (1,) * (stacked.ndim - 2) + (len(states),))
    return np.sum(stacked * weights, axis=0)


def prediction_mse(state: PredictorState, M: int) -> float:
    return M * state.mse_per_entry


def simulate_observation_history(
    profile: FadingProfile,
    M: int,
    aging: AgingParams,
    p_p: float,
    order: int,
    rng: Rng,
    batch: Tuple[int, ...] = (),
) -> Tuple[List[np.ndarray], np.ndarray]:
    """
    Run ``order + 1`` training instants: the channel is drawn at the oldest one,
    observed, then aged and observed again at each later instant.

    Returns the observations (most recent first) and the channel at the most
    recent instant. With ``order == 0`` the draws match ``generate_channel``
    followed by ``observe_and_estimate``.
    """
    channel = generate_channel(profile, M, rng, batch)
    observations = [observe_and_estimate(channel, profile, p_p, rng).observation]
    for _ in range(order):
        channel = age_channel(channel, aging, profile, rng)
        observations.append(observe_and_estimate(channel, profile, p_p, rng).observation)
    return observations[::-1], channel
