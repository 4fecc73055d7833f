"""
Scenario geometry and clustered-multipath channels.

A path toward angle phi contributes alpha * a(phi) a(phi)^H (departure angle equals
arrival angle); each user and each target owns exactly one path.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from jrcbeam.base import Scenario
from jrcbeam.exceptions import (
    BeamspaceResolutionWarning,
    InvalidArgumentError,
    InvalidDimensionError,
)
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.numerics import CovarianceSet, hermitian_part, sample_covariance

logger = logging.getLogger(LOGGER_NAME)


@dataclass(frozen=True)
class AngleSet:
    """Angles (degrees) of the communication users and of the radar targets."""

    comms_angles_deg: List[float] = field(default_factory=list)
    radar_angles_deg: List[float] = field(default_factory=list)


@dataclass(frozen=True)
class ChannelSet:
    """One channel realization: h = h_c + h_r, all N x N."""

    h_c: np.ndarray
    h_r: np.ndarray
    h: np.ndarray

    @classmethod
    def from_components(cls, h_c: np.ndarray, h_r: np.ndarray) -> "ChannelSet":
        if h_c.shape != h_r.shape:
            raise InvalidDimensionError(
                f"component channels differ in shape: {h_c.shape} vs {h_r.shape}"
            )
        return cls(h_c=h_c, h_r=h_r, h=h_c + h_r)

    @property
    def dim(self) -> int:
        return self.h.shape[0]


def steering_matrix(angles_deg: Sequence[float], n: int, spacing: float = 0.5) -> np.ndarray:
    """
    Stacks ULA steering vectors as columns.

    Args:
        angles_deg (Sequence[float]): Angles in degrees.
        n (int): Number of antennas.
        spacing (float): d / lambda.

    Returns:
        np.ndarray: (n x len(angles)) matrix, column l = a(angles[l]), unit norm.
    """
    if n < 1:
        raise InvalidDimensionError(f"array needs at least one antenna, got {n}")
    phase = 2.0 * np.pi * spacing * np.sin(np.deg2rad(np.asarray(angles_deg, dtype=float)))
    return np.exp(1j * np.outer(np.arange(n), phase)) / np.sqrt(n)


def steering_vector(angle_deg: float, n: int, spacing: float = 0.5) -> np.ndarray:
    """
    Array response (1/sqrt(n)) [1, e^{j 2 pi (d/lambda) sin(phi)}, ..., e^{j (n-1) 2 pi (d/lambda) sin(phi)}]^T.

    Args:
        angle_deg (float): Angle phi in degrees.
        n (int): Number of antennas.
        spacing (float): d / lambda.

    Returns:
        np.ndarray: Unit-norm vector of length n.
    """
    return steering_matrix([angle_deg], n, spacing)[:, 0]


def place_angles(scenario: Scenario) -> AngleSet:
    """
    Places users and targets on an equispaced grid, alternating between the two.

    Grid point i (0-based) sits at lo + (i + 1) (hi - lo) / (K + T + 1). Points 1, 3, 5, ...
    (1-based) go to users and 2, 4, 6, ... to targets; once one group is exhausted the
    remaining points go to the other.

    Args:
        scenario (Scenario): Supplies K, T and the angle range.

    Returns:
        AngleSet: Deterministic placement.

    Raises:
        InvalidArgumentError: If there is neither a user nor a target.
    """
    n_users, n_targets = scenario.n_users, scenario.n_targets
    total = n_users + n_targets
    if total < 1:
        raise InvalidArgumentError("angle placement needs at least one user or target")
    if total > scenario.n_antennas:
        message = (
            f"{total} users and targets exceed the beamspace resolution of "
            f"{scenario.n_antennas} antennas"
        )
        logger.warning(message)
        warnings.warn(message, BeamspaceResolutionWarning, stacklevel=2)

    lo, hi = scenario.angle_range_deg
    step = (hi - lo) / (total + 1)
    grid = [lo + (i + 1) * step for i in range(total)]

    comms: List[float] = []
    radar: List[float] = []
    for i, angle in enumerate(grid):
        wants_user = i % 2 == 0
        if (wants_user and len(comms) < n_users) or len(radar) == n_targets:
            comms.append(angle)
        else:
            radar.append(angle)
    return AngleSet(comms_angles_deg=comms, radar_angles_deg=radar)


def synthesize_channel(
    angles: Sequence[float],
    gains: Sequence[complex],
    n: int,
    spacing: float = 0.5,
) -> np.ndarray:
    """
    H = (N / sqrt(N_c)) sum_l alpha_l a(phi_l) a(phi_l)^H.

    Args:
        angles (Sequence[float]): Path angles in degrees.
        gains (Sequence[complex]): Path gains alpha_l, same length as angles.
        n (int): Number of antennas.
        spacing (float): d / lambda.

    Returns:
        np.ndarray: N x N matrix of rank <= N_c; the zero matrix when there is no path.

    Raises:
        InvalidArgumentError: If angles and gains differ in length.
    """
    if len(angles) != len(gains):
        raise InvalidArgumentError(
            f"{len(angles)} path angles but {len(gains)} path gains"
        )
    if len(angles) == 0:
        return np.zeros((n, n), dtype=complex)
    a = steering_matrix(angles, n, spacing)
    gains = np.asarray(gains, dtype=complex)
    return (n / np.sqrt(len(angles))) * (a * gains) @ a.conj().T


def complex_gains(rng: np.random.Generator, size: int) -> np.ndarray:
    """i.i.d. CN(0, 1) samples."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent random stream of Monte-Carlo trial ``trial`` under root ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def covariance_rng(seed: int) -> np.random.Generator:
    """Stream of the Monte-Carlo covariance estimate, disjoint from every trial stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, 1)))


def draw_channel_set(
    scenario: Scenario, angles: AngleSet, rng: np.random.Generator
) -> ChannelSet:
    """
    Draws h_c over the user angles and h_r over the target angles with i.i.d. CN(0, 1) gains.

    Communication gains are drawn before radar gains, so one seed always reproduces the same set.

    Args:
        scenario (Scenario): Supplies N and d / lambda.
        angles (AngleSet): Path angles.
        rng (np.random.Generator): Random stream owned by the caller.

    Returns:
        ChannelSet: One realization.
    """
    n, spacing = scenario.n_antennas, scenario.antenna_spacing_over_wavelength
    comms_gains = complex_gains(rng, len(angles.comms_angles_deg))
    radar_gains = complex_gains(rng, len(angles.radar_angles_deg))
    h_c = synthesize_channel(angles.comms_angles_deg, comms_gains, n, spacing)
    h_r = synthesize_channel(angles.radar_angles_deg, radar_gains, n, spacing)
    return ChannelSet.from_components(h_c, h_r)


def path_covariance(angles: Sequence[float], n: int, spacing: float = 0.5) -> np.ndarray:
    """E{H^H H} = (N^2 / N_c) sum_l a(phi_l) a(phi_l)^H for unit-power independent gains."""
    if len(angles) == 0:
        return np.zeros((n, n), dtype=complex)
    a = steering_matrix(angles, n, spacing)
    return hermitian_part((n**2 / len(angles)) * a @ a.conj().T)


def analytic_covariances(scenario: Scenario, angles: AngleSet) -> CovarianceSet:
    """
    Closed-form second-order statistics of the scenario's channels.

    Cross terms between users and targets vanish because the gains are independent and
    zero-mean, so R = R_C + R_R.
    """
    n, spacing = scenario.n_antennas, scenario.antenna_spacing_over_wavelength
    r_c = path_covariance(angles.comms_angles_deg, n, spacing)
    r_r = path_covariance(angles.radar_angles_deg, n, spacing)
    return CovarianceSet(r=r_c + r_r, r_c=r_c, r_r=r_r)


def sampled_covariances(
    scenario: Scenario, angles: AngleSet, draws: int, rng: np.random.Generator
) -> CovarianceSet:
    """Monte-Carlo counterpart of analytic_covariances over ``draws`` channel realizations."""
    if draws < 1:
        raise InvalidArgumentError(f"need at least one draw, got {draws}")
    channels = [draw_channel_set(scenario, angles, rng) for _ in range(draws)]
    return CovarianceSet(
        r=sample_covariance(channels, "total"),
        r_c=sample_covariance(channels, "comms"),
        r_r=sample_covariance(channels, "radar"),
    )
