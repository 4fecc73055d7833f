import os

DEFAULT_VERSION = "0.1.0"
__version__ = os.getenv("CLI_VERSION", DEFAULT_VERSION)
