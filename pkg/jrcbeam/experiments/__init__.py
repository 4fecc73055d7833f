from jrcbeam.experiments.approximation import ApproximationExperiment, run_approximation
from jrcbeam.experiments.beampattern import BeampatternExperiment, run_beampattern
from jrcbeam.experiments.sweep import SweepExperiment, run_sweep

__all__ = [
    "ApproximationExperiment",
    "BeampatternExperiment",
    "SweepExperiment",
    "run_approximation",
    "run_beampattern",
    "run_sweep",
]
