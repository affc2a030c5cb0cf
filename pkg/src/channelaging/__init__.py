from .experiments.config_parser import parse_config
from .experiments.runner import ChannelAgingExperiments, run_scenario
from .models.channel.fading_profile import FadingProfile
from .pydantic_models.models import DownlinkConfig, MultiCellConfig, ScenarioConfig, SystemConfig

__all__ = [
    "ChannelAgingExperiments",
    "DownlinkConfig",
    "FadingProfile",
    "MultiCellConfig",
    "ScenarioConfig",
    "SystemConfig",
    "parse_config",
    "run_scenario",
]
