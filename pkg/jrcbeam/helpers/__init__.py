import logging
import os

from dotenv import load_dotenv

load_dotenv()

ROOT_PATH = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

LOGGER_NAME = "jrcbeam_logger"
LOG_FORMAT = "%(asctime)s.%(msecs)03d | %(name)s | %(levelname)s | %(message)s"
LOG_DATEFMT = "%Y-%m-%dT%H:%M:%S"


def _package_logger() -> logging.Logger:
    """The package logger with one stream handler; JRC_LOG_LEVEL sets the start level."""
    package_logger = logging.getLogger(LOGGER_NAME)
    package_logger.propagate = False  # records stop here; tests re-enable it for caplog
    level = logging.getLevelName(os.getenv("JRC_LOG_LEVEL", "INFO").upper())
    package_logger.setLevel(level if isinstance(level, int) else logging.INFO)

    if not package_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT))
        package_logger.addHandler(handler)
    return package_logger


logger = _package_logger()
