import argparse
import logging
from typing import Any, Dict, Tuple

from jrcbeam.base import validated
from jrcbeam.context import Context
from jrcbeam.exceptions import ConfigurationError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.helpers.utils_io import parse_config, settings_from_config
from jrcbeam.settings import Settings

logger = logging.getLogger(LOGGER_NAME)


def load_run_context(args: argparse.Namespace) -> Tuple[Dict[str, Any], Context]:
    """
    Reads the config named on the command line and builds the run context.

    Config keys and the --jobs flag override the environment-driven settings.

    Args:
        args (argparse.Namespace): Parsed arguments with ``config`` and ``jobs``.

    Returns:
        Tuple[Dict[str, Any], Context]: The parsed config (empty without --config) and the context.

    Raises:
        ConfigurationError: On any invalid config value, environment setting or job count.
    """
    config = parse_config(args.config) if args.config else {}
    context = Context(settings=validated(Settings))
    settings = settings_from_config(config, context.settings)
    if args.jobs is not None:
        if args.jobs < 1:
            raise ConfigurationError(f"jobs must be at least 1, got {args.jobs}")
        harness = settings.harness.model_copy(update={"jobs": args.jobs})
        settings = settings.model_copy(update={"harness": harness})
    context.settings = settings
    context.output_path = settings.harness.output_path
    return config, context
