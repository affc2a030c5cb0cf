import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.linalg import bessel_j0, sample_complex_gaussian
from channelaging.models.kernel.rng import Rng
from channelaging.pydantic_models.models import CellGeometry

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[float, np.ndarray]


@dataclass(frozen=True)
class AgingParams:
    alpha: float
    # unset when alpha is given directly rather than through the Jakes model
    fd_ts: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.alpha) or abs(self.alpha) > 1.0:
            raise ValueError(f"alpha must lie in [-1, 1], got {self.alpha}")

    @classmethod
    def from_alpha(cls, alpha: float) -> "AgingParams":
        return cls(alpha=float(alpha))

    @property
    def innovation_scale(self) -> float:
        return 1.0 - self.alpha**2


@dataclass
class ChannelRealization:
    true_channel: np.ndarray
    observation: np.ndarray
    estimate: np.ndarray
    est_error: np.ndarray


def estimate_variance(beta: ArrayOrFloat, p_p: float) -> ArrayOrFloat:
    """Per-entry variance of the MMSE estimate, p_p beta^2 / (1 + p_p beta)."""
    return p_p * np.square(beta) / (1.0 + p_p * np.asarray(beta))


def mmse_shrinkage(betas: np.ndarray, p_p: float) -> np.ndarray:
    return betas / (betas + 1.0 / p_p)


def jakes_alpha(fd_ts: float) -> AgingParams:
    if not math.isfinite(fd_ts) or fd_ts < 0.0:
        raise ValueError(f"fd_ts must be finite and >= 0, got {fd_ts}")
    return AgingParams(alpha=bessel_j0(2.0 * math.pi * fd_ts), fd_ts=fd_ts)


def drop_users(K: int, geometry: CellGeometry, rng: Rng) -> FadingProfile:
    """
    Drop ``K`` users uniformly over the annulus between the guard range
    and the cell edge, with log-normal shadowing.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    r0, R = geometry.guard_m, geometry.radius_m
    u = rng.uniform(0.0, 1.0, K)
    distances = np.sqrt(r0**2 + u * (R**2 - r0**2))
    shadow_db = rng.normal(0.0, geometry.shadow_std_db, K)
    shadow_draws = 10.0 ** (shadow_db / 10.0)
    profile = FadingProfile.from_positions(distances, shadow_draws, geometry)
    logger.debug(
        "Dropped %d users, beta range [%.3e, %.3e]", K, profile.betas.min(), profile.betas.max()
    )
    return profile


def generate_channel(
    profile: FadingProfile,
    M: int,
    rng: Rng,
    batch: Tuple[int, ...] = (),
) -> np.ndarray:
    """G = H D^(1/2): column k is i.i.d. CN(0, beta_k)."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    H = sample_complex_gaussian(M, profile.K, 1.0, rng, batch)
    return H * np.sqrt(profile.betas)


def observe_and_estimate(
    true_channel: np.ndarray,
    profile: FadingProfile,
    p_p: float,
    rng: Rng,
) -> ChannelRealization:
    if not p_p > 0.0:
        raise ValueError(f"p_p must be > 0, got {p_p}")
    *batch, M, K = true_channel.shape
    if K != profile.K:
        raise ValueError(f"channel has {K} columns, profile has {profile.K} users")
    noise = sample_complex_gaussian(M, K, 1.0, rng, tuple(batch))
    observation = true_channel + noise / math.sqrt(p_p)
    estimate = observation * mmse_shrinkage(profile.betas, p_p)
    return ChannelRealization(
        true_channel=true_channel,
        observation=observation,
        estimate=estimate,
        est_error=true_channel - estimate,
    )


def age_channel(
    current: np.ndarray,
    aging: AgingParams,
    profile: FadingProfile,
    rng: Rng,
) -> np.ndarray:
    """One AR(1) step: g[n+1] = alpha g[n] + e[n+1], e ~ CN(0, (1 - alpha^2) beta)."""
    *batch, M, K = current.shape
    if K != profile.K:
        raise ValueError(f"channel has {K} columns, profile has {profile.K} users")
    innovation = sample_complex_gaussian(M, K, 1.0, rng, tuple(batch))
    innovation *= np.sqrt(aging.innovation_scale * profile.betas)
    return aging.alpha * current + innovation


def aged_csi(estimate: np.ndarray, aging: AgingParams) -> np.ndarray:
    return aging.alpha * estimate
