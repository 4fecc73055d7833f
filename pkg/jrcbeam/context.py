from datetime import datetime
from typing import Any

from jrcbeam.settings import Settings


class Context:
    """
    Context class that holds configuration options for an experiment run.

    Attributes:
        settings (Settings): Application settings (environment driven).
        output_path (str): Directory where result files are written when no explicit path is given.
        sweep_filename (str): Default file name of sweep results.
        beampattern_filename (str): Default file name of beampattern results.
        approximation_filename (str): Default file name of the capacity-approximation sweep.
    """

    def __init__(self, **kwargs: Any) -> None:
        """
        Initializes the Context with default configuration options.

        Args:
            **kwargs (Any): Overrides for the settings object (``settings=...``).
        """
        self.settings: Settings = kwargs.get("settings") or Settings()
        self.today = datetime.now()
        self.today_ts = self.today.strftime("%Y-%m-%d_%H-%M-%S")
        self.status: str = "pending"

        # ----------------------------------------------------------------------------------------
        # Results
        # ----------------------------------------------------------------------------------------
        self.output_path: str = self.settings.harness.output_path
        self.sweep_filename: str = "sweep"
        self.beampattern_filename: str = "beampattern"
        self.approximation_filename: str = "approximation"

    def default_output(self, filename: str, fmt: str) -> str:
        """Result path under the configured output directory, stamped with the run start time."""
        return f"{self.output_path}/{self.today_ts}_{filename}.{fmt}"
