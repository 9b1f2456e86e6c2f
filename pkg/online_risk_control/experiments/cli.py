"""Command line entry point.

Running
-------
Run every trial of an experiment:
```
python -m online_risk_control run configs/synthetic_cqr.yaml --trials 3 --out runs/synthetic
```

Sweep a parameter over a grid:
```
python -m online_risk_control sweep configs/synthetic_cqr.yaml --param controller.gamma \
    --grid 0.025,0.03,0.05,0.09,0.1,0.15,0.2,0.35
```

Flags can also come from a settings file (-s) or ORC_* environment variables.
The exit code is 1 when a guaranteed bound check fails, 2 on invalid input.
"""
import sys

import configargparse
import yaml

from ..streams import StreamFormatError
from ..utils import get_logger, make_reproducible
from .config import ConfigError, load_document, parse_config, set_dotted
from .runner import run_experiment
from .sweep import sweep


def build_parser():
    parser = configargparse.ArgParser(
        prog="online_risk_control",
        description="Calibrate online prediction sets and check their risk bounds.",
        config_file_parser_class=configargparse.YAMLConfigFileParser,
    )
    parser.add_argument("-s", "--settings", is_config_file=True, help="YAML file of flag defaults")
    parser.add_argument("command", choices=("run", "sweep"))
    parser.add_argument("config", help="experiment configuration (YAML)")
    parser.add_argument("--param", env_var="ORC_PARAM", help="dotted config field to sweep, e.g. controller.gamma")
    parser.add_argument("--grid", env_var="ORC_GRID", help="comma separated sweep values")
    parser.add_argument("--seed", type=int, env_var="ORC_SEED", help="overrides the config seed")
    parser.add_argument("--trials", type=int, env_var="ORC_TRIALS", help="overrides the config trial count")
    parser.add_argument("--out", env_var="ORC_OUT", help="overrides the config output directory")
    parser.add_argument("--workers", type=int, default=1, env_var="ORC_WORKERS", help="parallel trials")
    parser.add_argument("--log-file", env_var="ORC_LOG_FILE", help="also log at DEBUG level to this file")
    return parser


def parse_grid(text):
    """Comma separated values, each read as YAML so numbers stay numbers."""
    return [yaml.safe_load(item) for item in text.split(",") if item.strip()]


def apply_overrides(document, args):
    for field, value in (("seed", args.seed), ("trials", args.trials), ("output", args.out)):
        if value is not None:
            document = set_dotted(document, field, value)
    return document


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = get_logger(log_file=args.log_file)

    try:
        document = apply_overrides(load_document(args.config), args)
        config = parse_config(document)
        make_reproducible(config.seed)

        if args.command == "run":
            result = run_experiment(config, args.workers)
            return 0 if result.passed else 1

        if not args.param or not args.grid:
            parser.error("sweep needs --param and --grid")

        result = sweep(document, args.param, parse_grid(args.grid), args.workers)
        print(result.ranking.to_string(index=False))
        return 0 if result.passed else 1

    except (ConfigError, StreamFormatError, FileNotFoundError) as error:
        logger.error("%s", error)
        return 2


if __name__ == "__main__":
    sys.exit(main())
