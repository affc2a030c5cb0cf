import math
from typing import Optional, Union

Order = Optional[Union[int, float]]


def prediction_gain(alpha: float, pred_order: Order) -> float:
    """
    SNR enhancement factor of an order-p predictor over aged CSI:
    1 for aged CSI, sum_{j=0..p} alpha^(2j) for finite p, 1 / (1 - alpha^2)
    for ``math.inf``.
    """
    if pred_order is None:
        return 1.0
    a2 = alpha**2
    if pred_order == math.inf:
        if a2 >= 1.0:
            raise ValueError(f"infinite-order prediction diverges for |alpha| = 1, got alpha={alpha}")
        return 1.0 / (1.0 - a2)
    if pred_order < 0 or int(pred_order) != pred_order:
        raise ValueError(f"predictor order must be a non-negative integer or math.inf, got {pred_order}")
    return math.fsum(a2**j for j in range(int(pred_order) + 1))


def asymptotic_rate(
    gamma: float,
    M: int,
    E_u: float,
    tau: int,
    alpha: float,
    beta_k: float,
    pred_order: int = 0,
    predicted: bool = False,
) -> float:
    """Large-M equivalent of the rate under p_u = E_u / M^gamma."""
    if not gamma > 0.0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    gain = prediction_gain(alpha, pred_order if predicted else None)
    snr = alpha**2 * gain * tau * E_u**2 * beta_k**2 / float(M) ** (2.0 * gamma - 1.0)
    return math.log2(1.0 + snr)


def scaling_limit(alpha: float, tau: int, E_u: float, beta_k: float, pred_order: Order = None) -> float:
    """M -> infinity limit of the rate at gamma = 1/2 (aged, order p or math.inf)."""
    gain = prediction_gain(alpha, pred_order)
    return math.log2(1.0 + alpha**2 * gain * tau * E_u**2 * beta_k**2)
