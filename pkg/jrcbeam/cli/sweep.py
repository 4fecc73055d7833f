import argparse
import logging
from typing import List

from jrcbeam.cli.common import load_run_context
from jrcbeam.experiments.sweep import SweepExperiment
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.helpers.decorators import timeit
from jrcbeam.helpers.utils_io import result_path, sweep_spec_from_config

logger = logging.getLogger(LOGGER_NAME)


def parser_name() -> str:
    """
    Returns the name of the parser.

    Returns:
        str: The name of the parser, 'sweep'.
    """
    return "sweep"


def add_parser(
    subparsers: argparse._SubParsersAction, parents_: List[argparse.ArgumentParser]
) -> argparse.ArgumentParser:
    """
    Adds the 'sweep' parser to the given subparsers collection.

    Args:
        subparsers (argparse._SubParsersAction): The subparsers collection to add to.
        parents_ (List[argparse.ArgumentParser]): Parent parsers providing the shared options.

    Returns:
        argparse.ArgumentParser: The parser that was added to the subparsers collection.
    """
    return subparsers.add_parser(
        parser_name(),
        help="Monte-Carlo sweep of the proposed method and the baselines over SNR, antenna count or rho",
        parents=parents_,
    )


@timeit
def apply(args: argparse.Namespace) -> None:
    """
    Validates the config, runs the sweep and writes its rows.

    Args:
        args (argparse.Namespace): Parsed arguments as a namespace object.
    """
    config, context = load_run_context(args)
    spec = sweep_spec_from_config(config, context.settings, args.seed)

    experiment = SweepExperiment(context)
    result = experiment.apply(spec)

    path = result_path(
        args.output,
        spec.output_path,
        context.default_output(context.sweep_filename, args.format),
    )
    experiment.store_results(result, path, args.format)
