import functools
import logging
import time
from argparse import Namespace

from jrcbeam.helpers import LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)


def timeit(method):
    """
    Logs the wall-clock time of a CLI command or an experiment step.

    A sub-command's ``apply(args)`` reports at INFO level; anything else (usually
    ``BaseExperiment.apply``) reports at DEBUG under its step name.

    Args:
        method (callable): Function or method to time.

    Returns:
        callable: The wrapped callable.
    """

    @functools.wraps(method)
    def timed(*args, **kwargs):
        start_time = time.perf_counter()
        result = method(*args, **kwargs)
        elapsed_time = time.perf_counter() - start_time

        owner = args[0] if args else None
        if isinstance(owner, Namespace):
            logger.info(f"Finished command in {elapsed_time:.3f} seconds.")
        else:
            name = getattr(owner, "_entity_name", None) or method.__qualname__
            logger.debug(f"{name} took {elapsed_time:.6f} seconds to run.")
        return result

    return timed
