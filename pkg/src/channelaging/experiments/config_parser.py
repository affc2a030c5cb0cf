"""
Scenario files are INI text::

    [scenario]
    preset = fig1          ; optional, file values are layered on top
    kind = uplink_snr
    sweep_parameter = p_u_db
    sweep_values = -10, 0, 10

    [uplink]
    M = 128
    detectors = mrc, zf

Keys are case sensitive. Powers are given in dB and converted to linear
units only when the runner builds the model configs.
"""
import configparser
import logging
import math
import os
from enum import Enum
from typing import Dict, Mapping, Optional

from pydantic import ValidationError

from channelaging.errors import ConfigError
from channelaging.experiments.presets import load_preset
from channelaging.models.uplink.detectors import DetectorKind
from channelaging.pydantic_models.models import (
    SETTINGS_FOR_SECTION,
    ScenarioConfig,
    ScenarioKind,
    Settings,
)
from channelaging.utils.get_resource import get_resource
from channelaging.utils.save_results import format_value

logger = logging.getLogger(__name__)

SECTIONS = ("scenario",) + tuple(SETTINGS_FOR_SECTION)


def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        strict=True,
        interpolation=None,
        empty_lines_in_values=False,
        inline_comment_prefixes=(";",),
    )
    parser.optionxform = str
    return parser


def _read_file(path: str) -> Dict[str, Dict[str, str]]:
    fname = get_resource(path)
    parser = _new_parser()
    with open(fname, encoding="utf-8") as f:
        text = f.read()
    try:
        parser.read_string(text, source=fname)
    except configparser.DuplicateOptionError as e:
        raise ConfigError(
            f"duplicate key '{e.option}' in section [{e.section}]",
            key=e.option,
            location=f"{e.source}:{e.lineno}",
        ) from e
    except configparser.DuplicateSectionError as e:
        raise ConfigError(
            f"duplicate section [{e.section}]", key=e.section, location=f"{e.source}:{e.lineno}"
        ) from e
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError(
            "key outside of any section", key=None, location=f"{e.source}:{e.lineno}"
        ) from e
    except configparser.ParsingError as e:
        raise ConfigError(f"cannot parse config: {e}", location=fname) from e

    sections = {}
    for name in parser.sections():
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}], expected one of {', '.join(SECTIONS)}", key=name)
        sections[name] = dict(parser.items(name))
    return sections


def _translate(error: ValidationError, location: Optional[str]) -> ConfigError:
    first = error.errors()[0]
    loc = [str(part) for part in first["loc"]]
    key = loc[-1] if loc else None
    where = ".".join(loc) or "config"
    if first["type"] == "extra_forbidden":
        message = f"unknown key '{where}'"
    elif first["type"] == "missing":
        message = f"missing key '{where}'"
    else:
        message = f"invalid value for '{where}': {first['msg']}"
    return ConfigError(message, key=key, location=location)


def _check_sections(sections: Mapping[str, Mapping[str, object]], location: Optional[str]):
    kind_value = sections.get("scenario", {}).get("kind")
    if kind_value is None:
        raise ConfigError("missing key 'kind' in [scenario]", key="kind", location=location)
    try:
        kind = ScenarioKind(kind_value)
    except ValueError as e:
        choices = ", ".join(k.value for k in ScenarioKind)
        raise ConfigError(f"unknown kind '{kind_value}', expected one of {choices}", key="kind", location=location) from e
    for name in SETTINGS_FOR_SECTION:
        if name in sections and name != kind.section:
            raise ConfigError(f"section [{name}] is not used by kind {kind.value}", key=name, location=location)


def check_settings(kind: ScenarioKind, settings: Settings, location: Optional[str] = None):
    """Cross-key constraints of a settings section, reported with the offending key."""
    tau = settings.tau
    if tau is not None and tau < settings.K:
        raise ConfigError(f"tau ({tau}) must be >= K ({settings.K})", key="tau", location=location)
    effective_tau = tau if tau is not None else settings.K
    T = getattr(settings, "T", None)
    if T is not None and T <= effective_tau:
        raise ConfigError(f"T ({T}) must exceed tau ({effective_tau})", key="T", location=location)
    if kind.section == "uplink" and DetectorKind.ZF in settings.detectors and settings.M <= settings.K:
        raise ConfigError(
            f"ZF needs M > K, got M={settings.M}, K={settings.K}", key="M", location=location
        )
    if kind.section == "uplink" and settings.M < 2:
        raise ConfigError(f"MRC needs M >= 2, got M={settings.M}", key="M", location=location)


def _check_sweep(config: ScenarioConfig, location: Optional[str]):
    settings = config.settings
    name = config.sweep_parameter
    if name not in type(settings).model_fields:
        raise ConfigError(
            f"sweep_parameter '{name}' is not a key of [{config.kind.section}]",
            key="sweep_parameter",
            location=location,
        )
    if name == "K":
        raise ConfigError("K cannot be swept: the user drop is fixed per scenario", key="sweep_parameter", location=location)
    for value in config.sweep_values:
        if not math.isfinite(value):
            raise ConfigError(f"sweep value {value} is not finite", key=name, location=location)
        point = apply_sweep_value(settings, name, value, location)
        check_settings(config.kind, point, location)


def apply_sweep_value(settings: Settings, name: str, value: float, location: Optional[str] = None) -> Settings:
    data = settings.model_dump()
    data[name] = value
    try:
        return type(settings).model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"sweep value {value:g} is invalid for '{name}': {e.errors()[0]['msg']}", key=name, location=location) from e


def parse_config(
    path: Optional[str] = None,
    preset: Optional[str] = None,
    overrides: Optional[Mapping[str, object]] = None,
) -> ScenarioConfig:
    """
    Build a validated ScenarioConfig from a preset, a config file and CLI
    overrides, in increasing order of precedence.
    """
    file_sections = _read_file(path) if path else {}
    preset = preset or file_sections.get("scenario", {}).get("preset")

    sections: Dict[str, Dict[str, object]] = {}
    if preset:
        try:
            sections = load_preset(preset)
        except KeyError as e:
            raise ConfigError(str(e.args[0]), key="preset", location=path) from e
    for name, values in file_sections.items():
        sections.setdefault(name, {}).update(values)
    scenario = sections.setdefault("scenario", {})
    if preset:
        scenario["preset"] = preset
    scenario.update({key: value for key, value in (overrides or {}).items() if value is not None})

    data = dict(scenario)
    for name in SETTINGS_FOR_SECTION:
        if name in sections:
            data[name] = sections[name]
    _check_sections(sections, path)
    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise _translate(e, path) from e
    try:
        config.geometry()
    except ValidationError as e:
        raise ConfigError(f"invalid cell geometry: {e.errors()[0]['msg']}", key="guard_m", location=path) from e

    check_settings(config.kind, config.settings, path)
    _check_sweep(config, path)
    logger.info(
        "Loaded scenario %s (%s), sweep %s over %d points",
        config.kind.value, preset or "no preset", config.sweep_parameter, len(config.sweep_values),
    )
    return config


def _ini_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        return format_value(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_ini_value(v) for v in value)
    return str(value)


def _section_items(model, skip=()) -> Dict[str, str]:
    return {key: _ini_value(value) for key, value in model if value is not None and key not in skip}


def write_config(config: ScenarioConfig, path: str) -> str:
    """Write ``config`` in scenario-file format; parse_config(path) gives it back."""
    parser = _new_parser()
    parser["scenario"] = _section_items(config, skip=SETTINGS_FOR_SECTION)
    parser[config.kind.section] = _section_items(config.settings)
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        parser.write(f)
    return path
