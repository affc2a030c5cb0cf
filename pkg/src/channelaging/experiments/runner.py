import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List

from tqdm import tqdm

from channelaging.errors import ChannelAgingError, ConfigError, ScenarioError
from channelaging.experiments.config_parser import apply_sweep_value, write_config
from channelaging.models.bounds.asymptotics import scaling_limit
from channelaging.models.bounds.bounds import sum_rate_bound, sum_rate_bound_perfect
from channelaging.models.channel.channel_model import AgingParams, drop_users, jakes_alpha
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.downlink.mrt import (
    downlink_monte_carlo_rate,
    downlink_report,
    downlink_scaling_limit,
)
from channelaging.models.kernel.rng import Rng, derive_seed
from channelaging.models.multicell.multicell import (
    CsiKind,
    MulticellRegime,
    multicell_limit,
    multicell_rate_aged,
    multicell_rate_predicted,
)
from channelaging.models.uplink.monte_carlo import monte_carlo_rate
from channelaging.models.uplink.rate_report import CsiMode, overhead_factor
from channelaging.pydantic_models.models import (
    DownlinkConfig,
    DownlinkSettings,
    MultiCellConfig,
    MultiCellSettings,
    ScenarioConfig,
    ScenarioKind,
    SystemConfig,
    UplinkSettings,
)
from channelaging.utils.get_resource import resolve_uri
from channelaging.utils.save_results import Row, check_rows, save_rows
from channelaging.utils.timing import Timer
from channelaging.utils.units import db_to_linear

logger = logging.getLogger(__name__)

# stream reserved for the user drop; Monte Carlo curves use derived seeds
DROP_STREAM = 2**63


def sidecar_path(output_path: str) -> str:
    return output_path + ".meta.ini"


def _aging(fd_ts: float, alpha) -> AgingParams:
    return AgingParams.from_alpha(alpha) if alpha is not None else jakes_alpha(fd_ts)


class ChannelAgingExperiments:
    """
    Runs one ScenarioConfig: one CSV row per sweep point per curve, plus a
    sidecar holding the full configuration.
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.timer = Timer()
        self.profile = None
        self.point_handlers: Dict[ScenarioKind, Callable] = {
            ScenarioKind.UPLINK_SNR: self.uplink_point,
            ScenarioKind.UPLINK_SCALING: self.uplink_point,
            ScenarioKind.UPLINK_DOPPLER: self.doppler_point,
            ScenarioKind.DOWNLINK_SNR: self.downlink_point,
            ScenarioKind.DOWNLINK_SCALING: self.downlink_scaling_point,
            ScenarioKind.MULTICELL_AGED: self.multicell_point,
            ScenarioKind.MULTICELL_PREDICTED: self.multicell_point,
        }

    def load_drop(self) -> FadingProfile:
        """Reuse the pinned drop when ``drop_file`` exists, otherwise draw and pin a new one."""
        settings = self.config.settings
        drop_file = None
        if self.config.drop_file:
            try:
                drop_file = resolve_uri(self.config.drop_file)
            except ValueError as e:
                raise ConfigError(str(e), key="drop_file") from e
        if drop_file and os.path.isfile(drop_file):
            profile = FadingProfile.load(drop_file)
            if profile.K != settings.K:
                raise ConfigError(
                    f"drop file has {profile.K} users, scenario needs K={settings.K}", key="drop_file", location=drop_file
                )
            logger.info("Reusing the %d-user drop pinned in %s", profile.K, drop_file)
            return profile
        profile = drop_users(settings.K, self.config.geometry(), Rng(self.config.seed, DROP_STREAM))
        logger.info("Drew a %d-user drop with seed %d", profile.K, self.config.seed)
        if drop_file:
            profile.save(drop_file)
        return profile

    def run(self) -> str:
        config = self.config
        self.timer.reset()
        if config.kind.section != "multicell":
            self.profile = self.load_drop()
            self.timer("drop")

        rows: List[Row] = []
        indices = list(range(len(config.sweep_values)))
        show = logger.isEnabledFor(logging.INFO)
        # points come back in sweep order, so the first failing point is the one reported
        with tqdm(total=len(indices), desc=config.kind.value, disable=not show) as progress:
            if config.threads == 1 or len(indices) == 1:
                for point_rows in map(self.run_point, indices, config.sweep_values):
                    rows.extend(point_rows)
                    progress.update()
            else:
                with ThreadPoolExecutor(max_workers=config.threads) as pool:
                    for point_rows in pool.map(self.run_point, indices, config.sweep_values):
                        rows.extend(point_rows)
                        progress.update()
        self.timer("sweep")

        save_rows(config.output_path, rows)
        write_config(config, sidecar_path(config.output_path))
        self.timer("write")
        logger.info("Wrote %d rows to %s, config to %s", len(rows), config.output_path, sidecar_path(config.output_path))
        logger.info("Timings: %s", self.timer.summary())
        return config.output_path

    def run_point(self, index: int, value: float) -> List[Row]:
        config = self.config
        logger.debug("Sweep point %s=%g", config.sweep_parameter, value)
        settings = apply_sweep_value(config.settings, config.sweep_parameter, value)
        try:
            point_rows = self.point_handlers[config.kind](index, value, settings)
            check_rows(point_rows)
        except (ChannelAgingError, ValueError, ArithmeticError) as e:
            raise ScenarioError(config.sweep_parameter, value, e) from e
        return point_rows

    def _mc_seed(self, index: int, curve: int) -> int:
        return derive_seed(self.config.seed, index, curve)

    # uplink

    def system_config(self, settings: UplinkSettings) -> SystemConfig:
        config = SystemConfig(
            M=settings.M,
            K=settings.K,
            tau=settings.tau,
            T=settings.T,
            p_u=db_to_linear(settings.p_u_db),
            fd_ts=settings.fd_ts,
            alpha=settings.alpha,
            gamma=settings.gamma,
            E_u=db_to_linear(settings.E_u_db),
        )
        if self.config.kind is ScenarioKind.UPLINK_SCALING:
            config = config.scaled(settings.M)
        return config

    def _curve_systems(self, system: SystemConfig, settings) -> List[SystemConfig]:
        """The aged curve first, then one config per predictor order."""
        return [system] + [system.model_copy(update={"pred_order": p}) for p in settings.pred_orders]

    def _monte_carlo_rows(self, index, value, system, detector, curve) -> List[Row]:
        mode = system.csi_mode
        report = monte_carlo_rate(
            system, self.profile, detector, mode, self.config.trials, self._mc_seed(index, curve), self.config.threads
        )
        return [(value, f"{detector.value}_{mode.tag}_mc", report.sum_rate, report.sum_std_err)]

    def uplink_point(self, index: int, value: float, settings: UplinkSettings) -> List[Row]:
        system = self.system_config(settings)
        rows = []
        curve = 0
        for detector in settings.detectors:
            for curve_system in self._curve_systems(system, settings):
                mode = curve_system.csi_mode
                bound = sum_rate_bound(curve_system, self.profile, detector, mode)
                rows.append((value, f"{detector.value}_{mode.tag}_bound", bound, 0.0))
                if settings.monte_carlo:
                    rows += self._monte_carlo_rows(index, value, curve_system, detector, curve)
                curve += 1
        # the finite limit only exists for gamma = 1/2
        if self.config.kind is ScenarioKind.UPLINK_SCALING and math.isclose(system.gamma, 0.5):
            alpha = system.aging().alpha
            for curve_system in self._curve_systems(system, settings):
                mode = curve_system.csi_mode
                limit = math.fsum(
                    scaling_limit(alpha, system.tau, system.E_u, beta, mode.pred_order) for beta in self.profile.betas
                )
                rows.append((value, f"{mode.tag}_limit", system.overhead_factor * limit, 0.0))
        return rows

    def doppler_point(self, index: int, value: float, settings: UplinkSettings) -> List[Row]:
        system = self.system_config(settings)
        current = system.model_copy(update={"alpha": 1.0})
        rows = []
        curve = 0
        for detector in settings.detectors:
            name = detector.value
            rows.append((value, f"{name}_perfect", sum_rate_bound_perfect(system, self.profile, detector), 0.0))
            rows.append((value, f"{name}_current", sum_rate_bound(current, self.profile, detector, CsiMode.aged()), 0.0))
            for curve_system in self._curve_systems(system, settings):
                mode = curve_system.csi_mode
                bound = sum_rate_bound(curve_system, self.profile, detector, mode)
                rows.append((value, f"{name}_{mode.tag}_bound", bound, 0.0))
                if settings.monte_carlo:
                    rows += self._monte_carlo_rows(index, value, curve_system, detector, curve)
                curve += 1
        return rows

    # downlink

    def downlink_config(self, settings: DownlinkSettings, **powers) -> DownlinkConfig:
        return DownlinkConfig(
            M=settings.M,
            K=settings.K,
            alpha=_aging(settings.fd_ts, settings.alpha).alpha,
            betas=self.profile.betas.tolist(),
            beta_exp=settings.beta_exp,
            **powers,
        )

    def downlink_point(self, index: int, value: float, settings: DownlinkSettings) -> List[Row]:
        downlink = self.downlink_config(settings, p_b=db_to_linear(settings.p_b_db), p_p=db_to_linear(settings.p_p_db))
        factor = overhead_factor(settings.T, settings.tau or settings.K)
        rows = [(value, "mrt_closed_form", factor * downlink_report(downlink).sum_rate, 0.0)]
        if settings.monte_carlo:
            report = downlink_monte_carlo_rate(downlink, self.config.trials, self._mc_seed(index, 0))
            rows.append((value, "mrt_mc", factor * report.sum_rate, factor * report.sum_std_err))
        return rows

    def downlink_scaling_point(self, index: int, value: float, settings: DownlinkSettings) -> List[Row]:
        tau = settings.tau or settings.K
        E_u = db_to_linear(settings.E_u_db)
        factor = overhead_factor(settings.T, tau)
        rows = []
        for E_b_db in settings.E_b_dbs:
            downlink = self.downlink_config(settings, E_b=db_to_linear(E_b_db)).scaled(settings.M, tau, E_u)
            label = f"Eb{E_b_db:g}dB"
            rows.append((value, f"mrt_{label}", factor * downlink_report(downlink).sum_rate, 0.0))
            limit = math.fsum(
                downlink_scaling_limit(
                    downlink.E_b, E_u, tau, downlink.alpha, downlink.betas, downlink.beta_exp, downlink.M, k
                )
                for k in range(settings.K)
            )
            rows.append((value, f"limit_{label}", factor * limit, 0.0))
        return rows

    # multicell

    def multicell_point(self, index: int, value: float, settings: MultiCellSettings) -> List[Row]:
        alpha = _aging(settings.fd_ts, settings.alpha).alpha
        base = dict(
            C=settings.C,
            K=settings.K,
            tau=settings.tau,
            beta_same=settings.beta_same,
            beta_cross=settings.beta_cross,
            E_u=db_to_linear(settings.E_u_db),
            alpha=alpha,
        )
        predicted = self.config.kind is ScenarioKind.MULTICELL_PREDICTED
        orders = settings.pred_orders if predicted else [0]
        rows = []
        for gamma in settings.gammas:
            regime = MulticellRegime.for_gamma(gamma)
            label = f"gamma{gamma:g}"
            if not predicted:
                current = MultiCellConfig(gamma=gamma, **{**base, "alpha": 1.0})
                rows.append((value, f"current_{label}", settings.K * multicell_rate_aged(current, settings.M), 0.0))
            for order in orders:
                cell = MultiCellConfig(gamma=gamma, pred_order=order, **base)
                if predicted:
                    tag, mode = f"predicted_p{order}", CsiKind.PREDICTED
                    rate = multicell_rate_predicted(cell, settings.M)
                else:
                    tag, mode = "aged", CsiKind.AGED
                    rate = multicell_rate_aged(cell, settings.M)
                rows.append((value, f"{tag}_{label}", settings.K * rate, 0.0))
                if regime is not MulticellRegime.GAMMA_SUB_HALF or settings.C >= 2:
                    limit = multicell_limit(cell, regime, mode)
                    rows.append((value, f"{tag}_limit_{label}", settings.K * limit, 0.0))
        return rows


def run_scenario(config: ScenarioConfig) -> str:
    return ChannelAgingExperiments(config).run()
