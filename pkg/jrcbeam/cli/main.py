import argparse
import logging
import os
import sys
from typing import List

import jrcbeam.cli.approximation as approximation
import jrcbeam.cli.beampattern as beampattern
import jrcbeam.cli.sweep as sweep
import jrcbeam.cli.version

from jrcbeam.exceptions import ConfigurationError, ResultsIOError
from jrcbeam.helpers import LOG_DATEFMT, LOG_FORMAT, LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)
MODULES = [sweep, beampattern, approximation]

EXIT_OK = 0
EXIT_CONFIGURATION_ERROR = 1
EXIT_IO_ERROR = 2


def config_logs(args: argparse.Namespace) -> None:
    """
    Configures logging based on the provided arguments.

    - Ensures that the log directory exists if a log file is specified.
    - Sets the logging level and log handlers (stream and file).

    Args:
        args (argparse.Namespace): Expected attributes:
            - log_file (str): Path to the log file.
            - log_level (str): Logging level (e.g., "DEBUG", "INFO").
    """
    if args.log_file:
        log_dir = os.path.dirname(args.log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

    numeric_level = getattr(logging, args.log_level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(
            f"Invalid log level: {args.log_level}. Choose any of {', '.join([name for name in logging._nameToLevel.keys()][:-1])}"
        )

    logger.handlers.clear()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT)
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)

    if args.log_file:
        file_handler = logging.FileHandler(args.log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.setLevel(numeric_level)
    logger.debug(args)


def global_options(with_defaults: bool) -> argparse.ArgumentParser:
    """
    Parent parser of the logging and version options.

    The copy attached to the sub-commands suppresses its defaults, so an option given
    before the sub-command is not overwritten by the sub-parser.

    Args:
        with_defaults (bool): Whether missing options fall back to the environment defaults.

    Returns:
        argparse.ArgumentParser: Parser without help, usable as a parent.
    """
    global_parser = argparse.ArgumentParser(add_help=False)
    group = global_parser.add_argument_group("Global options")
    group.add_argument(
        "--log-level",
        default=os.getenv("JRC_LOG_LEVEL", "INFO") if with_defaults else argparse.SUPPRESS,
        help="Log level (JRC_LOG_LEVEL, else INFO)",
    )
    group.add_argument(
        "--log-file",
        default=os.getenv("JRC_LOG_FILE", None) if with_defaults else argparse.SUPPRESS,
        help="Log to file (JRC_LOG_FILE)",
    )
    group.add_argument(
        "-v",
        "--version",
        action="version",
        version=jrcbeam.cli.version.__version__,
    )
    return global_parser


def parse_args(args_: List[str]) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        args_ (List[str]): List of command-line arguments.

    Returns:
        argparse.Namespace: Parsed arguments as a namespace object.
    """
    global_parser = global_options(with_defaults=True)

    # options shared by every experiment
    common_parser = argparse.ArgumentParser(add_help=False)
    common_parser.add_argument(
        "--config",
        default=None,
        help="Flat 'key = value' experiment config; built-in defaults when omitted",
    )
    common_parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Root seed; overrides JRC_SEED and the config file (%(default)s)",
    )
    common_parser.add_argument(
        "--output",
        default=None,
        help="Result file; defaults to the config 'output' key, else a timestamped file under JRC_HARNESS_OUTPUT_PATH",
    )
    common_parser.add_argument(
        "--format",
        choices=["csv", "json"],
        default="csv",
        help="Result format (%(default)s)",
    )
    common_parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Worker processes for the Monte-Carlo trials; results do not depend on it",
    )

    parser = argparse.ArgumentParser(
        description="Hybrid beamforming experiments for joint radar-communications",
        parents=[global_parser],
    )
    subparsers = parser.add_subparsers(help="Modules", dest="module", required=True)

    for module in MODULES:
        module.add_parser(subparsers, [global_options(with_defaults=False), common_parser])

    return parser.parse_args(args_)


def apply(args: argparse.Namespace) -> None:
    """
    Apply the selected module's functionality based on the parsed arguments.

    Args:
        args (argparse.Namespace): Parsed arguments as a namespace object.
    """
    for module in MODULES:
        if args.module == module.parser_name():
            module.apply(args)


def run(args_: List[str]) -> int:
    """
    Run the argument parsing and apply the selected module.

    Args:
        args_ (List[str]): List of command-line arguments.

    Returns:
        int: Exit code, 0 on success, 1 on a configuration error, 2 on a results I/O error.
    """
    args = parse_args(args_)
    config_logs(args)
    try:
        apply(args)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIGURATION_ERROR
    except ResultsIOError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO_ERROR
    return EXIT_OK


def main() -> None:
    """
    Main entry point for the script.
    """
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
