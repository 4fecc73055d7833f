import argparse
import logging
from typing import List

from jrcbeam.base import METHODS
from jrcbeam.cli.common import load_run_context
from jrcbeam.experiments.beampattern import BeampatternExperiment
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.helpers.decorators import timeit
from jrcbeam.helpers.utils_io import result_path, scenario_from_config

logger = logging.getLogger(LOGGER_NAME)

DEFAULT_TARGET_ANGLES = [22.0, 32.0, 42.0]


def parser_name() -> str:
    """
    Returns the name of the parser.

    Returns:
        str: The name of the parser, 'beampattern'.
    """
    return "beampattern"


def add_parser(
    subparsers: argparse._SubParsersAction, parents_: List[argparse.ArgumentParser]
) -> argparse.ArgumentParser:
    """
    Adds the 'beampattern' parser to the given subparsers collection.

    Args:
        subparsers (argparse._SubParsersAction): The subparsers collection to add to.
        parents_ (List[argparse.ArgumentParser]): Parent parsers providing the shared options.

    Returns:
        argparse.ArgumentParser: The parser that was added to the subparsers collection.
    """
    parser = subparsers.add_parser(
        parser_name(),
        help="Normalized received power of a method's radar precoder over the angle grid",
        parents=parents_,
    )
    parser.add_argument(
        "--method",
        choices=list(METHODS),
        default=None,
        help="Method whose radar precoder is probed; config 'beampattern_method', else proposed",
    )
    parser.add_argument(
        "--grid-step",
        type=float,
        default=None,
        help="Probe step in degrees, at most 1; config 'grid_step', else JRC_HARNESS_GRID_STEP_DEG",
    )
    return parser


@timeit
def apply(args: argparse.Namespace) -> None:
    """
    Probes the radar precoder of one method and writes the angle_deg, nrp, nrp_db grid.

    Args:
        args (argparse.Namespace): Parsed arguments as a namespace object.
    """
    config, context = load_run_context(args)
    scenario = scenario_from_config(config, context.settings, args.seed)
    targets = config.get("target_angles", DEFAULT_TARGET_ANGLES)
    method = args.method or config.get("beampattern_method", "proposed")
    grid_step = (
        args.grid_step if args.grid_step is not None else context.settings.harness.grid_step_deg
    )

    experiment = BeampatternExperiment(context)
    pattern = experiment.apply(scenario, targets, method, grid_step)
    if pattern.zero_power:
        logger.warning("The radar precoder receives no power; the pattern is all zero")

    path = result_path(
        args.output,
        config.get("output"),
        context.default_output(context.beampattern_filename, args.format),
    )
    experiment.store_results(pattern, path, args.format)
