from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from channelaging.errors import NotPositiveDefiniteError, SingularGramError
from channelaging.models.kernel.linalg import hermitian_solve

if TYPE_CHECKING:
    from channelaging.models.channel.channel_model import AgingParams
    from channelaging.models.channel.fading_profile import FadingProfile


class DetectorKind(str, Enum):
    MRC = "mrc"
    ZF = "zf"


def build_detector(csi: np.ndarray, kind: DetectorKind) -> np.ndarray:
    """MRC uses the CSI itself; ZF uses its pseudo-inverse G (G^H G)^-1."""
    kind = DetectorKind(kind)
    if csi.ndim != 2:
        raise ValueError(f"csi must be an M x K matrix, got shape {csi.shape}")
    if kind is DetectorKind.MRC:
        return csi
    M, K = csi.shape
    if M < K:
        raise ValueError(f"ZF needs M >= K, got M={M}, K={K}")
    gram = csi.conj().T @ csi
    try:
        solved = hermitian_solve(gram, csi.conj().T)
    except NotPositiveDefiniteError as e:
        raise SingularGramError(f"ZF Gram matrix is singular: {e}") from e
    return solved.conj().T


def _sinr(detector: np.ndarray, csi: np.ndarray, error_floor: float, p_u: float) -> np.ndarray:
    # gains[k, i] = |a_k^H g_i|^2
    gains = np.abs(detector.conj().T @ csi) ** 2
    signal = np.diag(gains)
    interference = gains.sum(axis=1) - signal
    noise_gain = np.sum(np.abs(detector) ** 2, axis=0)
    denominator = p_u * interference + noise_gain * (p_u * error_floor + 1.0)
    # a zero detector column (e.g. alpha = 0 aged CSI) carries no signal
    return np.divide(p_u * signal, denominator, out=np.zeros_like(signal), where=denominator > 0.0)


def instantaneous_sinr_aged(
    detector: np.ndarray,
    csi: np.ndarray,
    profile: "FadingProfile",
    aging: "AgingParams",
    p_u: float,
    p_p: float,
) -> np.ndarray:
    """SINR with the stale-estimate error treated as uncorrelated Gaussian noise."""
    from channelaging.models.channel.channel_model import estimate_variance

    if not (p_u > 0.0 and p_p > 0.0):
        raise ValueError(f"p_u and p_p must be > 0, got p_u={p_u}, p_p={p_p}")
    betas = profile.betas
    error_floor = float(np.sum(betas - aging.alpha**2 * estimate_variance(betas, p_p)))
    return _sinr(detector, csi, error_floor, p_u)


def instantaneous_sinr_predicted(
    detector: np.ndarray,
    predicted_csi: np.ndarray,
    thetas: np.ndarray,
    profile: "FadingProfile",
    aging: "AgingParams",
    p_u: float,
) -> np.ndarray:
    if not p_u > 0.0:
        raise ValueError(f"p_u must be > 0, got {p_u}")
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.shape != profile.betas.shape:
        raise ValueError(f"need {profile.K} thetas, got {thetas.shape}")
    error_floor = float(np.sum(profile.betas - aging.alpha**2 * thetas))
    return _sinr(detector, predicted_csi, error_floor, p_u)
