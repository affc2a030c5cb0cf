import argparse
import logging
import sys
from typing import List, Optional

from decouple import config as env_config

from channelaging.errors import ConfigError, ScenarioError
from channelaging.experiments.config_parser import parse_config
from channelaging.experiments.presets import list_presets
from channelaging.experiments.runner import run_scenario

logger = logging.getLogger("channelaging")

EXIT_SCENARIO_FAILED = 1
EXIT_BAD_CONFIG = 2


def setup_logging():
    level = env_config("CHANNEL_AGING_LOG_LEVEL", default="INFO").upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="Scenario INI file, layered over the preset if any")
    parser.add_argument("--seed", type=int, help="Master seed (unsigned 64-bit)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per sweep point")
    parser.add_argument("--out", help="CSV output path; the config lands next to it as <out>.meta.ini")
    parser.add_argument("--threads", type=int, help="Monte Carlo worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="channelaging",
        description="Massive MIMO channel aging experiments: rate bounds, Monte Carlo and large-M limits",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the scenario described by a config file")
    _add_run_flags(run)

    preset = commands.add_parser("preset", help="Run one of the bundled scenarios")
    preset.add_argument("name", help="Preset name, see list-presets")
    _add_run_flags(preset)

    commands.add_parser("list-presets", help="Print the bundled scenarios")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging()

    if args.command == "list-presets":
        print(list_presets())
        return 0
    if args.command == "run" and not args.config:
        logger.error("run needs --config")
        return EXIT_BAD_CONFIG

    overrides = dict(seed=args.seed, trials=args.trials, output_path=args.out, threads=args.threads)
    try:
        scenario = parse_config(
            path=args.config,
            preset=args.name if args.command == "preset" else None,
            overrides=overrides,
        )
        output = run_scenario(scenario)
    except ConfigError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_BAD_CONFIG
    except FileNotFoundError as e:
        logger.error("%s", e)
        return EXIT_BAD_CONFIG
    except ScenarioError as e:
        logger.error("%s", e)
        return EXIT_SCENARIO_FAILED

    print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
