import math
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from channelaging.models.uplink.detectors import DetectorKind

DEFAULT_E_U = 10 ** 1.5


def _split_list(value):
    # config files carry lists as "a, b, c"
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


def default_threads() -> int:
    from decouple import config

    return config("CHANNEL_AGING_THREADS", default=1, cast=int)


class CellGeometry(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    radius_m: float = Field(
        default=1000.0,
        gt=0.0,
        description="Cell radius R in meters",
    )
    guard_m: float = Field(
        default=100.0,
        gt=0.0,
        description="Guard range r0 in meters; no user is closer to the BS",
    )
    pathloss_exp: float = Field(
        default=3.8,
        gt=0.0,
        description="Path loss exponent",
    )
    shadow_std_db: float = Field(
        default=8.0,
        ge=0.0,
        description="Standard deviation of the log-normal shadow fading in dB",
    )

    @model_validator(mode="after")
    def check_annulus(self):
        if not self.guard_m < self.radius_m:
            raise ValueError(
                f"guard_m ({self.guard_m}) must be smaller than radius_m ({self.radius_m})"
            )
        return self


class SystemConfig(BaseModel):
    model_config = ConfigDict(allow_inf_nan=False)

    M: int = Field(default=128, ge=1, description="Number of BS antennas")
    K: int = Field(default=10, ge=1, description="Number of single-antenna users")
    tau: Optional[int] = Field(
        default=None,
        ge=1,
        description="Training length in symbols; defaults to K",
    )
    p_u: float = Field(default=10.0, gt=0.0, description="Uplink power per user, linear")
    fd_ts: float = Field(default=0.1, ge=0.0, description="Normalized Doppler shift fD Ts")
    alpha: Optional[float] = Field(
        default=None,
        ge=-1.0,
        le=1.0,
        description="Temporal correlation; overrides J0(2 pi fD Ts) when set",
    )
    pred_order: int = Field(default=0, ge=0, description="Wiener predictor order p; 0 uses the aged estimate")
    gamma: float = Field(default=0.5, gt=0.0, description="Power scaling exponent")
    E_u: float = Field(default=DEFAULT_E_U, gt=0.0, description="Scaled uplink power, linear")
    T: Optional[int] = Field(default=None, ge=1, description="Frame length in symbols")

    @model_validator(mode="after")
    def check_training(self):
        if self.tau is None:
            self.tau = self.K
        if self.tau < self.K:
            raise ValueError(f"tau ({self.tau}) must be >= K ({self.K})")
        if self.T is not None and self.T <= self.tau:
            raise ValueError(f"T ({self.T}) must be larger than tau ({self.tau})")
        return self

    @property
    def p_p(self) -> float:
        return self.tau * self.p_u

    @property
    def overhead_factor(self) -> float:
        if self.T is None:
            return 1.0
        return (self.T - self.tau) / self.T

    def aging(self):
        from channelaging.models.channel.channel_model import AgingParams, jakes_alpha

        if self.alpha is not None:
            return AgingParams.from_alpha(self.alpha)
        return jakes_alpha(self.fd_ts)

    @property
    def csi_mode(self):
        from channelaging.models.uplink.rate_report import CsiMode

        return CsiMode.predicted(self.pred_order) if self.pred_order else CsiMode.aged()

    def scaled(self, M: int) -> "SystemConfig":
        """Same scenario at ``M`` antennas with ``p_u = E_u / M^gamma``."""
        return self.model_copy(update={"M": M, "p_u": self.E_u / float(M) ** self.gamma})


class DownlinkConfig(BaseModel):
    model_config = ConfigDict(allow_inf_nan=False)

    M: int = Field(default=64, ge=1, description="Number of BS antennas")
    K: int = Field(default=10, ge=1, description="Number of users")
    p_b: float = Field(default=10.0, gt=0.0, description="BS transmit power, linear")
    p_p: float = Field(default=10.0, gt=0.0, description="Training power, linear")
    alpha: float = Field(default=1.0, ge=-1.0, le=1.0, description="Temporal correlation")
    betas: List[float] = Field(description="Large-scale fading per user")
    E_b: float = Field(default=10.0, gt=0.0, description="Scaled BS power, linear")
    beta_exp: float = Field(
        default=0.5,
        gt=0.0,
        description="Exponent of M in p_b = E_b / M^beta_exp",
    )

    @model_validator(mode="after")
    def check_betas(self):
        if len(self.betas) != self.K:
            raise ValueError(f"betas has {len(self.betas)} entries, K is {self.K}")
        if any(b < 0.0 for b in self.betas):
            raise ValueError("betas must be >= 0")
        return self

    def sigma2(self) -> np.ndarray:
        betas = np.asarray(self.betas, dtype=np.float64)
        return self.p_p * betas**2 / (1.0 + self.p_p * betas)

    def scaled(self, M: int, tau: int, E_u: float) -> "DownlinkConfig":
        """Same scenario at ``M`` antennas with ``p_b = E_b / M^beta_exp`` and ``p_p = tau E_u / sqrt(M)``."""
        M = int(M)
        return self.model_copy(
            update={"M": M, "p_b": self.E_b / float(M) ** self.beta_exp, "p_p": tau * E_u / math.sqrt(M)}
        )


class MultiCellConfig(BaseModel):
    model_config = ConfigDict(allow_inf_nan=False)

    C: int = Field(default=7, ge=1, description="Number of cells sharing the pilots")
    K: int = Field(default=10, ge=1, description="Users per cell")
    beta_same: float = Field(default=1.0, gt=0.0, description="beta_bbk, serving link")
    beta_cross: float = Field(default=0.32, gt=0.0, description="beta_bck for c != b")
    gamma: float = Field(default=0.5, gt=0.0, description="Power scaling exponent")
    E_u: float = Field(default=DEFAULT_E_U, gt=0.0, description="Scaled uplink power, linear")
    tau: Optional[int] = Field(default=None, ge=1, description="Training length; defaults to K")
    alpha: float = Field(default=1.0, ge=-1.0, le=1.0, description="Temporal correlation")
    pred_order: int = Field(default=0, ge=0, description="Wiener predictor order p")
    betas: Optional[List[List[float]]] = Field(
        default=None,
        description="Optional C x K table of beta_bci seen by the serving BS",
    )
    serving_cell: int = Field(default=0, ge=0, description="Serving cell b")
    user: int = Field(default=0, ge=0, description="Evaluated user k")

    @model_validator(mode="after")
    def check_table(self):
        if self.tau is None:
            self.tau = self.K
        if self.tau < self.K:
            raise ValueError(f"tau ({self.tau}) must be >= K ({self.K})")
        if self.serving_cell >= self.C:
            raise ValueError(f"serving_cell {self.serving_cell} out of range for C={self.C}")
        if self.user >= self.K:
            raise ValueError(f"user {self.user} out of range for K={self.K}")
        if self.betas is not None:
            table = np.asarray(self.betas, dtype=np.float64)
            if table.shape != (self.C, self.K):
                raise ValueError(f"betas must be {self.C}x{self.K}, got {table.shape}")
            if np.any(table <= 0.0):
                raise ValueError("betas must be > 0")
        return self

    def beta_table(self) -> np.ndarray:
        if self.betas is not None:
            return np.asarray(self.betas, dtype=np.float64)
        table = np.full((self.C, self.K), self.beta_cross)
        table[self.serving_cell, :] = self.beta_same
        return table


class ScenarioKind(str, Enum):
    UPLINK_SNR = "uplink_snr"
    UPLINK_DOPPLER = "uplink_doppler"
    UPLINK_SCALING = "uplink_scaling"
    DOWNLINK_SNR = "downlink_snr"
    DOWNLINK_SCALING = "downlink_scaling"
    MULTICELL_AGED = "multicell_aged"
    MULTICELL_PREDICTED = "multicell_predicted"

    @property
    def section(self) -> str:
        return self.value.split("_")[0]


class UplinkSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    M: int = Field(default=128, ge=1, description="Number of BS antennas")
    K: int = Field(default=10, ge=1, description="Number of users")
    tau: Optional[int] = Field(default=None, ge=1, description="Training length; defaults to K")
    T: Optional[int] = Field(default=None, ge=2, description="Frame length; unset means no overhead")
    p_u_db: float = Field(default=10.0, description="Uplink power per user in dB")
    E_u_db: float = Field(default=15.0, description="Scaled uplink power in dB")
    gamma: float = Field(default=0.5, gt=0.0, description="Power scaling exponent")
    fd_ts: float = Field(default=0.1, ge=0.0, description="Normalized Doppler shift")
    alpha: Optional[float] = Field(default=None, ge=-1.0, le=1.0, description="Direct temporal correlation")
    pred_orders: List[int] = Field(default=[1, 2], description="Predictor orders for predicted-CSI curves")
    detectors: List[DetectorKind] = Field(default=[DetectorKind.MRC, DetectorKind.ZF], min_length=1)
    monte_carlo: bool = Field(default=True, description="Add Monte Carlo curves next to the bounds")

    @field_validator("pred_orders", "detectors", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator("pred_orders")
    @classmethod
    def check_orders(cls, value: List[int]) -> List[int]:
        if any(p < 1 for p in value):
            raise ValueError("pred_orders must be >= 1; order 0 is the aged curve")
        return value


class DownlinkSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    M: int = Field(default=64, ge=1, description="Number of BS antennas")
    K: int = Field(default=10, ge=1, description="Number of users")
    tau: Optional[int] = Field(default=None, ge=1, description="Training length; defaults to K")
    T: Optional[int] = Field(default=None, ge=2, description="Frame length; unset means no overhead")
    p_b_db: float = Field(default=10.0, description="BS transmit power in dB")
    p_p_db: float = Field(default=10.0, description="Training power in dB")
    E_u_db: float = Field(default=3.0, description="Scaled uplink power in dB (training)")
    E_b_dbs: List[float] = Field(default=[10.0, 20.0], min_length=1, description="Scaled BS powers in dB")
    beta_exp: float = Field(default=0.5, gt=0.0, description="Exponent of M in p_b = E_b / M^beta_exp")
    fd_ts: float = Field(default=0.1, ge=0.0, description="Normalized Doppler shift")
    alpha: Optional[float] = Field(default=None, ge=-1.0, le=1.0, description="Direct temporal correlation")
    monte_carlo: bool = Field(default=True, description="Add moment-oracle Monte Carlo curves")

    @field_validator("E_b_dbs", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)


class MultiCellSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    M: int = Field(default=1024, ge=1, description="Number of BS antennas")
    C: int = Field(default=7, ge=1, description="Number of cells")
    K: int = Field(default=10, ge=1, description="Users per cell")
    tau: Optional[int] = Field(default=None, ge=1, description="Training length; defaults to K")
    beta_same: float = Field(default=1.0, gt=0.0, description="beta_bbk")
    beta_cross: float = Field(default=0.32, gt=0.0, description="beta_bck for c != b")
    gammas: List[float] = Field(default=[0.3, 0.5, 0.7], min_length=1, description="Power scaling exponents")
    E_u_db: float = Field(default=15.0, description="Scaled uplink power in dB")
    fd_ts: float = Field(default=0.1, ge=0.0, description="Normalized Doppler shift")
    alpha: Optional[float] = Field(default=None, ge=-1.0, le=1.0, description="Direct temporal correlation")
    pred_orders: List[int] = Field(default=[1, 2], description="Predictor orders for predicted-CSI curves")

    @field_validator("gammas", "pred_orders", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @field_validator("gammas")
    @classmethod
    def check_gammas(cls, value: List[float]) -> List[float]:
        if any(g <= 0.0 for g in value):
            raise ValueError("gammas must be > 0")
        return value


Settings = Union[UplinkSettings, DownlinkSettings, MultiCellSettings]

SETTINGS_FOR_SECTION: Dict[str, type] = {
    "uplink": UplinkSettings,
    "downlink": DownlinkSettings,
    "multicell": MultiCellSettings,
}


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    kind: ScenarioKind = Field(description="Which experiment to run")
    preset: Optional[str] = Field(default=None, description="Preset the file was layered on")
    trials: int = Field(default=10_000, ge=1, description="Monte Carlo trials per point")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Master seed")
    threads: int = Field(default_factory=default_threads, ge=1, description="Monte Carlo worker threads")
    output_path: str = Field(default="results.csv", description="CSV destination")
    drop_file: Optional[str] = Field(default=None, description="Where the user drop is pinned")
    sweep_parameter: str = Field(description="Key of the active section to sweep")
    sweep_values: List[float] = Field(min_length=1, description="Values of the swept key")
    radius_m: float = Field(default=1000.0, description="Cell radius in meters")
    guard_m: float = Field(default=100.0, description="Guard range in meters")
    pathloss_exp: float = Field(default=3.8, description="Path loss exponent")
    shadow_std_db: float = Field(default=8.0, description="Shadow fading deviation in dB")
    uplink: Optional[UplinkSettings] = None
    downlink: Optional[DownlinkSettings] = None
    multicell: Optional[MultiCellSettings] = None

    @field_validator("sweep_values", mode="before")
    @classmethod
    def split_lists(cls, value):
        return _split_list(value)

    @model_validator(mode="after")
    def fill_section(self):
        section = self.kind.section
        if getattr(self, section) is None:
            setattr(self, section, SETTINGS_FOR_SECTION[section]())
        for other in SETTINGS_FOR_SECTION:
            if other != section and getattr(self, other) is not None:
                raise ValueError(f"section [{other}] is not used by kind {self.kind.value}")
        return self

    @property
    def settings(self) -> Settings:
        return getattr(self, self.kind.section)

    def geometry(self) -> CellGeometry:
        return CellGeometry(
            radius_m=self.radius_m,
            guard_m=self.guard_m,
            pathloss_exp=self.pathloss_exp,
            shadow_std_db=self.shadow_std_db,
        )
