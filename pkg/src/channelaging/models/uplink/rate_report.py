import csv
import os
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from channelaging.utils.save_results import format_value


def overhead_factor(T: Optional[int], tau: int) -> float:
    """Share (T - tau) / T of the frame left for data; 1 when T is unset."""
    if T is None:
        return 1.0
    if T <= tau:
        raise ValueError(f"frame length T={T} must exceed the training length tau={tau}")
    return (T - tau) / T


@dataclass(frozen=True)
class CsiMode:
    """Aged CSI (``pred_order`` unset) or Wiener-predicted CSI of a given order."""

    pred_order: Optional[int] = None

    def __post_init__(self):
        if self.pred_order is not None and self.pred_order < 0:
            raise ValueError(f"predictor order must be >= 0, got {self.pred_order}")

    @classmethod
    def aged(cls) -> "CsiMode":
        return cls()

    @classmethod
    def predicted(cls, order: int) -> "CsiMode":
        return cls(pred_order=order)

    @property
    def is_predicted(self) -> bool:
        return self.pred_order is not None

    @property
    def tag(self) -> str:
        return f"predicted_p{self.pred_order}" if self.is_predicted else "aged"

    def __str__(self):
        return f"predicted(p={self.pred_order})" if self.is_predicted else "aged"


@dataclass
class RateReport:
    per_user_rate: np.ndarray
    std_err: np.ndarray
    trials: int
    csi_mode: CsiMode
    overhead_factor: float = 1.0
    # standard error of the per-trial sum, before the overhead factor
    sum_std_err_raw: float = 0.0

    @property
    def sum_rate(self) -> float:
        return self.overhead_factor * float(np.sum(self.per_user_rate))

    @property
    def sum_std_err(self) -> float:
        return self.overhead_factor * self.sum_std_err_raw

    def to_csv(self, path: str, params: Optional[Mapping[str, object]] = None) -> str:
        params = dict(params or {})
        params.setdefault("csi_mode", str(self.csi_mode))
        params.setdefault("trials", self.trials)
        params.setdefault("sum_rate", format_value(self.sum_rate))
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow([f"{key}={value}" for key, value in params.items()])
            writer.writerow(["user", "rate", "std_err"])
            for k, (rate, err) in enumerate(zip(self.per_user_rate, self.std_err)):
                writer.writerow([k, format_value(rate), format_value(err)])
        return path
