import logging
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from channelaging.pydantic_models.models import CellGeometry
from channelaging.utils.get_resource import get_resource

logger = logging.getLogger(__name__)

_HEADER = "distance_m shadow_draw beta"


@dataclass(frozen=True)
class FadingProfile:
    """
    Large-scale fading coefficients of the K users in a cell.

    ``distances_m`` and ``shadow_draws`` are only known when the profile comes
    from a geometric drop; synthetic profiles built from bare betas leave them
    unset.
    """

    betas: np.ndarray
    distances_m: Optional[np.ndarray] = None
    shadow_draws: Optional[np.ndarray] = None

    @property
    def K(self) -> int:
        return int(self.betas.shape[0])

    @classmethod
    def from_betas(cls, betas: Sequence[float]) -> "FadingProfile":
        betas = np.array(betas, dtype=np.float64)
        if betas.ndim != 1 or betas.size == 0:
            raise ValueError(f"betas must be a non-empty vector, got shape {betas.shape}")
        if not np.all(np.isfinite(betas)) or np.any(betas < 0.0):
            raise ValueError("betas must be finite and >= 0")
        return cls(betas=betas)

    @classmethod
    def from_positions(
        cls,
        distances_m: Sequence[float],
        shadow_draws: Sequence[float],
        geometry: CellGeometry,
    ) -> "FadingProfile":
        """beta_k = z_k / (r_k / r0)^upsilon."""
        distances = np.array(distances_m, dtype=np.float64)
        shadow = np.array(shadow_draws, dtype=np.float64)
        if distances.shape != shadow.shape or distances.ndim != 1:
            raise ValueError("distances and shadow draws must be vectors of equal length")
        slack = 1e-9 * geometry.radius_m
        if np.any(distances < geometry.guard_m - slack) or np.any(distances > geometry.radius_m + slack):
            raise ValueError(
                f"user distances must lie in [{geometry.guard_m}, {geometry.radius_m}] m"
            )
        if not np.all(np.isfinite(shadow)) or np.any(shadow <= 0.0):
            raise ValueError("shadow draws must be finite and > 0")
        betas = shadow / (distances / geometry.guard_m) ** geometry.pathloss_exp
        return cls(betas=betas, distances_m=distances, shadow_draws=shadow)

    def permuted(self, order: Sequence[int]) -> "FadingProfile":
        order = np.asarray(order)
        if sorted(order.tolist()) != list(range(self.K)):
            raise ValueError(f"{order.tolist()} is not a permutation of {self.K} users")
        return FadingProfile(
            betas=self.betas[order],
            distances_m=None if self.distances_m is None else self.distances_m[order],
            shadow_draws=None if self.shadow_draws is None else self.shadow_draws[order],
        )

    @classmethod
    def load(cls, uri: str) -> "FadingProfile":
        fname = get_resource(uri)
        table = np.loadtxt(fname, ndmin=2)
        if table.shape[1] != 3:
            raise ValueError(f"{fname}: expected 3 columns ({_HEADER}), got {table.shape[1]}")
        distances, shadow, betas = table.T
        profile = cls.from_betas(betas)
        if np.all(np.isfinite(distances)) and np.all(np.isfinite(shadow)):
            profile = cls(betas=profile.betas, distances_m=distances, shadow_draws=shadow)
        logger.info("Loaded %d-user drop from %s", profile.K, fname)
        return profile

    def save(self, path: str) -> str:
        nan = np.full(self.K, np.nan)
        distances = nan if self.distances_m is None else self.distances_m
        shadow = nan if self.shadow_draws is None else self.shadow_draws
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        np.savetxt(path, np.column_stack([distances, shadow, self.betas]), fmt="%.17g", header=_HEADER)
        logger.info("Saved %d-user drop to %s", self.K, path)
        return path
