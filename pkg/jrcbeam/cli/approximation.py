import argparse
import logging
from typing import List

from jrcbeam.cli.common import load_run_context
from jrcbeam.exceptions import ConfigurationError
from jrcbeam.experiments.approximation import ApproximationExperiment
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.helpers.decorators import timeit
from jrcbeam.helpers.utils_io import result_path, sweep_spec_from_config

logger = logging.getLogger(LOGGER_NAME)


def parser_name() -> str:
    """
    Returns the name of the parser.

    Returns:
        str: The name of the parser, 'approximation'.
    """
    return "approximation"


def add_parser(
    subparsers: argparse._SubParsersAction, parents_: List[argparse.ArgumentParser]
) -> argparse.ArgumentParser:
    return subparsers.add_parser(
        parser_name(),
        help="Exact selection capacity against its first-order approximation over SNR",
        parents=parents_,
    )


@timeit
def apply(args: argparse.Namespace) -> None:
    config, context = load_run_context(args)
    if config.get("axis", "snr_db") != "snr_db":
        raise ConfigurationError("axis: the approximation experiment only sweeps snr_db")
    spec = sweep_spec_from_config(config, context.settings, args.seed)

    experiment = ApproximationExperiment(context)
    result = experiment.apply(spec)

    path = result_path(
        args.output,
        spec.output_path,
        context.default_output(context.approximation_filename, args.format),
    )
    experiment.store_results(result, path, args.format)
