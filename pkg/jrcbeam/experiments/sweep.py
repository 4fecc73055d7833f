import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np
from tqdm.auto import tqdm

from jrcbeam.base import BaseExperiment, Scenario, SweepResult, SweepRow, SweepSpec
from jrcbeam.context import Context
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.baselines import BaselineKind, evaluate_baseline
from jrcbeam.model.channel import (
    AngleSet,
    ChannelSet,
    analytic_covariances,
    covariance_rng,
    draw_channel_set,
    place_angles,
    sampled_covariances,
    trial_rng,
)
from jrcbeam.model.metrics import MuiReport, mui_weighted
from jrcbeam.model.numerics import RANK_TOLERANCE, CovarianceSet, dft_matrix
from jrcbeam.model.rfselect import dinkelbach_select, selection_precoders
from jrcbeam.settings import SolverSettings

logger = logging.getLogger(LOGGER_NAME)

# per method: (mui_bits, sigma_r_sq, sigma_c_sq)
TrialOutcome = List[Tuple[float, float, float]]


@dataclass(frozen=True)
class TrialTask:
    """Everything a worker needs to evaluate one Monte-Carlo trial of one sweep point."""

    scenario: Scenario
    angles: AngleSet
    methods: Tuple[str, ...]
    trial: int
    energy_fraction: float
    solver: SolverSettings
    proposed_precoders: Optional[Tuple[np.ndarray, np.ndarray]] = None
    rank_tolerance: float = RANK_TOLERANCE


def proposed_report(
    channels: ChannelSet,
    scenario: Scenario,
    precoders: Optional[Tuple[np.ndarray, np.ndarray]],
    solver: SolverSettings,
) -> MuiReport:
    """
    Weighted MUI with interference of the selected DFT beams.

    Without precomputed precoders the selection is made from this realization.
    """
    if precoders is None:
        selection, _ = dinkelbach_select(channels, scenario, solver)
        precoders = selection_precoders(selection, dft_matrix(scenario.n_antennas))
    sigma_c, sigma_r = precoders
    return mui_weighted(
        channels.h_c,
        channels.h_r,
        sigma_c,
        sigma_r,
        scenario.noise_power,
        scenario.rho,
        with_interference=True,
    )


def evaluate_trial(task: TrialTask) -> TrialOutcome:
    """Draws the trial's channels and evaluates every requested method on them."""
    scenario = task.scenario
    channels = draw_channel_set(scenario, task.angles, trial_rng(scenario.seed, task.trial))
    outcome: TrialOutcome = []
    for method in task.methods:
        if method == "proposed":
            report = proposed_report(channels, scenario, task.proposed_precoders, task.solver)
        else:
            report = evaluate_baseline(
                BaselineKind(method),
                channels,
                scenario,
                energy_fraction=task.energy_fraction,
                tol=task.rank_tolerance,
            )
        outcome.append((report.mui_bits, report.sigma_r_sq, report.sigma_c_sq))
    return outcome


class SweepExperiment(BaseExperiment):
    """
    Monte-Carlo sweep of the proposed selection and the baselines over one scenario field.

    Trial t of every axis value draws its gains from the stream keyed by (seed, t), so all
    points share channel realizations whenever the dimension allows it.
    """

    _entity_name: str = __qualname__

    def __init__(self, context: Context) -> None:
        super().__init__(context)
        self.harness = context.settings.harness
        self.solver = context.settings.solver
        self.numerics = context.settings.numerics

    def covariances(self, scenario: Scenario, angles: AngleSet) -> CovarianceSet:
        if self.harness.covariance == "sampled":
            return sampled_covariances(
                scenario, angles, self.harness.covariance_draws, covariance_rng(scenario.seed)
            )
        return analytic_covariances(scenario, angles)

    def tasks(self, spec: SweepSpec, value: float) -> Iterator[TrialTask]:
        scenario = spec.scenario_at(value)
        angles = place_angles(scenario)

        precoders = None
        if "proposed" in spec.methods and self.solver.mode == "covariance":
            selection, state = dinkelbach_select(
                self.covariances(scenario, angles), scenario, self.solver
            )
            logger.debug(
                f"{spec.axis}={value}: selection after {state.iteration} iteration(s), "
                f"{int(selection.d_c.sum())} comms / {int(selection.d_r.sum())} radar beams"
            )
            precoders = selection_precoders(selection, dft_matrix(scenario.n_antennas))

        for trial in range(spec.trials):
            yield TrialTask(
                scenario=scenario,
                angles=angles,
                methods=tuple(spec.methods),
                trial=trial,
                energy_fraction=self.harness.energy_fraction,
                solver=self.solver,
                proposed_precoders=precoders,
                rank_tolerance=self.numerics.rank_tolerance,
            )

    def _map(self, tasks: Iterable[TrialTask], total: int) -> List[TrialOutcome]:
        jobs = max(1, self.harness.jobs)
        outcomes: List[TrialOutcome] = []
        with tqdm(total=total, desc="trials", disable=None) as pbar:
            if jobs == 1:
                for task in tasks:
                    outcomes.append(evaluate_trial(task))
                    pbar.update(1)
            else:
                with ProcessPoolExecutor(max_workers=jobs) as executor:
                    # map yields in submission order, whatever the completion order
                    for outcome in executor.map(evaluate_trial, tasks, chunksize=8):
                        outcomes.append(outcome)
                        pbar.update(1)
        return outcomes

    def apply_step(self, spec: SweepSpec) -> SweepResult:
        """
        Runs the sweep.

        Args:
            spec (SweepSpec): Validated sweep.

        Returns:
            SweepResult: One row per (method, axis value), methods in the order of
            ``spec.methods`` and axis values ascending.
        """
        logger.info(
            f"Sweeping {spec.axis} over {spec.values} with {spec.trials} trial(s) and "
            f"methods {spec.methods} on {max(1, self.harness.jobs)} worker(s)"
        )
        per_value: Dict[float, np.ndarray] = {}
        for value in spec.values:
            outcomes = self._map(self.tasks(spec, value), spec.trials)
            # (trials, methods, 3)
            per_value[value] = np.asarray(outcomes, dtype=float)

        rows = []
        for m, method in enumerate(spec.methods):
            for value in spec.values:
                stats = per_value[value][:, m, :]
                rows.append(
                    SweepRow(
                        method=method,
                        axis_value=float(value),
                        mean_mui=float(np.mean(stats[:, 0])),
                        std_mui=float(np.std(stats[:, 0])),
                        mean_sigma_r_sq=float(np.mean(stats[:, 1])),
                        mean_sigma_c_sq=float(np.mean(stats[:, 2])),
                        trials=spec.trials,
                    )
                )
        return SweepResult(axis=spec.axis, rows=rows)


def run_sweep(spec: SweepSpec, context: Optional[Context] = None) -> SweepResult:
    """Runs ``spec`` as a SweepExperiment under ``context`` (default settings when None)."""
    return SweepExperiment(context or Context()).apply(spec)
