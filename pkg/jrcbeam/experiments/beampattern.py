import logging
from typing import Optional, Sequence

import numpy as np

from jrcbeam.base import METHODS, BaseExperiment, Scenario
from jrcbeam.context import Context
from jrcbeam.exceptions import ConfigurationError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.baselines import beamspace_masks, svd_nulling_precoders
from jrcbeam.model.channel import (
    AngleSet,
    analytic_covariances,
    place_angles,
    synthesize_channel,
)
from jrcbeam.model.metrics import Beampattern, nrp_beampattern
from jrcbeam.model.numerics import dft_matrix
from jrcbeam.model.rfselect import dinkelbach_select

logger = logging.getLogger(LOGGER_NAME)


def probe_grid(step_deg: float) -> np.ndarray:
    """Uniform probe angles from -90 to 90 degrees (both included when the step divides 180)."""
    count = int(np.floor(round(180.0 / step_deg, 9))) + 1
    return -90.0 + step_deg * np.arange(count)


class BeampatternExperiment(BaseExperiment):
    """
    Normalized received power of one method's radar precoder.

    Targets and users carry unit path gains so the pattern is a deterministic function of
    the geometry.
    """

    _entity_name: str = __qualname__

    def radar_precoder(
        self,
        method: str,
        scenario: Scenario,
        angles: AngleSet,
        h_c: np.ndarray,
        h_r: np.ndarray,
    ) -> np.ndarray:
        n = scenario.n_antennas
        if method == "proposed":
            selection, _ = dinkelbach_select(
                analytic_covariances(scenario, angles), scenario, self.context.settings.solver
            )
            logger.info(f"Proposed selection uses {int(selection.d_r.sum())} radar beam(s)")
            return dft_matrix(n) * selection.d_r
        if method == "svd_nulling":
            _, sigma_r_root = svd_nulling_precoders(
                h_c, h_r, self.context.settings.numerics.rank_tolerance
            )
            return sigma_r_root
        if method == "beamspace_nulling":
            f = dft_matrix(n) / np.sqrt(n)
            _, omega_r = beamspace_masks(
                h_c, h_r, f, self.context.settings.harness.energy_fraction
            )
            return f * omega_r.any(axis=0)
        return np.eye(n)

    def apply_step(
        self,
        scenario: Scenario,
        target_angles_deg: Sequence[float],
        method: str = "proposed",
        grid_step_deg: Optional[float] = None,
    ) -> Beampattern:
        """
        Builds the radar channel over the targets, designs the method's radar precoder
        and probes it.

        Args:
            scenario (Scenario): Array size, rho, users and spacing; n_targets is taken from the target list.
            target_angles_deg (Sequence[float]): Target angles.
            method (str): Method tag.
            grid_step_deg (Optional[float]): Probe step in (0, 1] degrees; settings default when None.

        Returns:
            Beampattern: NRP over [-90, 90] degrees.

        Raises:
            ConfigurationError: On an empty target list, an unknown method or a bad grid step.
        """
        targets = [float(angle) for angle in target_angles_deg]
        if not targets:
            raise ConfigurationError("target_angles: the beampattern needs at least one target")
        if method not in METHODS:
            raise ConfigurationError(
                f"beampattern_method: unknown method '{method}'; choose from {list(METHODS)}"
            )
        step = grid_step_deg if grid_step_deg is not None else self.context.settings.harness.grid_step_deg
        if not 0.0 < step <= 1.0:
            raise ConfigurationError(f"grid_step must lie in (0, 1] degrees, got {step}")

        scenario = scenario.model_copy(update={"n_targets": len(targets)})
        n, spacing = scenario.n_antennas, scenario.antenna_spacing_over_wavelength
        comms = place_angles(scenario).comms_angles_deg if scenario.n_users else []
        angles = AngleSet(comms_angles_deg=comms, radar_angles_deg=targets)
        h_c = synthesize_channel(comms, np.ones(len(comms)), n, spacing)
        h_r = synthesize_channel(targets, np.ones(len(targets)), n, spacing)

        f_r = self.radar_precoder(method, scenario, angles, h_c, h_r)
        logger.info(f"Probing the {method} radar precoder towards targets {targets}")
        return nrp_beampattern(h_r, f_r, probe_grid(step), n, spacing)


def run_beampattern(
    scenario: Scenario,
    target_angles_deg: Sequence[float],
    method: str = "proposed",
    grid_step_deg: float = 0.5,
    context: Optional[Context] = None,
) -> Beampattern:
    """Runs a BeampatternExperiment under ``context`` (default settings when None)."""
    return BeampatternExperiment(context or Context()).apply(
        scenario, target_angles_deg, method, grid_step_deg
    )
