import logging
from typing import List, Optional

import numpy as np
from tqdm.auto import tqdm

from jrcbeam.base import BaseExperiment, SweepResult, SweepRow, SweepSpec
from jrcbeam.context import Context
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.channel import draw_channel_set, place_angles, trial_rng
from jrcbeam.model.metrics import capacity_approximation
from jrcbeam.model.numerics import dft_matrix

logger = logging.getLogger(LOGGER_NAME)

APPROXIMATION_METHODS = ("exact", "approximation")


class ApproximationExperiment(BaseExperiment):
    """
    Selection capacity against its first-order Taylor approximation, with every beam
    switched to both operations (D_C = D_R = I). Only the SNR axis is meaningful here;
    SweepSpec.methods is ignored.
    """

    _entity_name: str = __qualname__

    def apply_step(self, spec: SweepSpec) -> SweepResult:
        values: List[np.ndarray] = []
        for value in spec.values:
            scenario = spec.scenario_at(value)
            n = scenario.n_antennas
            f = dft_matrix(n)
            everything = np.ones(n)
            angles = place_angles(scenario)

            outcome = np.empty((spec.trials, 2))
            for trial in tqdm(range(spec.trials), desc=f"{spec.axis}={value}", disable=None):
                channels = draw_channel_set(scenario, angles, trial_rng(scenario.seed, trial))
                outcome[trial] = capacity_approximation(
                    channels.h,
                    channels.h_c,
                    channels.h_r,
                    f,
                    everything,
                    everything,
                    scenario.noise_power,
                )
            values.append(outcome)

        rows = [
            SweepRow(
                method=method,
                axis_value=float(value),
                mean_mui=float(np.mean(outcome[:, m])),
                std_mui=float(np.std(outcome[:, m])),
                mean_sigma_r_sq=0.0,
                mean_sigma_c_sq=0.0,
                trials=spec.trials,
            )
            for m, method in enumerate(APPROXIMATION_METHODS)
            for value, outcome in zip(spec.values, values)
        ]
        return SweepResult(axis=spec.axis, rows=rows)


def run_approximation(spec: SweepSpec, context: Optional[Context] = None) -> SweepResult:
    return ApproximationExperiment(context or Context()).apply(spec)
