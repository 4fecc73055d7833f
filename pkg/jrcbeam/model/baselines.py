"""The four comparison schemes the proposed RF-chain selection is measured against."""

import dataclasses
import logging
from enum import Enum
from typing import Tuple

import numpy as np

from jrcbeam.base import Scenario
from jrcbeam.exceptions import InvalidArgumentError, InvalidDimensionError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.channel import ChannelSet
from jrcbeam.model.metrics import MuiReport, mui_beamspace, mui_weighted
from jrcbeam.model.numerics import RANK_TOLERANCE, dft_matrix, nullspace_basis

logger = logging.getLogger(LOGGER_NAME)

DEFAULT_ENERGY_FRACTION = 0.95


class BaselineKind(str, Enum):
    NO_INTERFERENCE = "no_interference"
    WITH_INTERFERENCE = "with_interference"
    SVD_NULLING = "svd_nulling"
    BEAMSPACE_NULLING = "beamspace_nulling"


def svd_nulling_precoders(
    h_c: np.ndarray, h_r: np.ndarray, tol: float = RANK_TOLERANCE
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Digital nulling: each operation transmits inside the nullspace of the other operation's channel.

    Args:
        h_c (np.ndarray): Communication channel.
        h_r (np.ndarray): Radar channel.
        tol (float): Relative rank tolerance.

    Returns:
        Tuple[np.ndarray, np.ndarray]: (sigma_c_root, sigma_r_root) with orthonormal columns;
        a root has zero columns when the other channel has full column rank.
    """
    if h_c.shape != h_r.shape:
        raise InvalidDimensionError(f"channels differ in shape: {h_c.shape} vs {h_r.shape}")
    sigma_c_root = nullspace_basis(h_r, tol)
    sigma_r_root = nullspace_basis(h_c, tol)
    for name, root in (("communication", sigma_c_root), ("radar", sigma_r_root)):
        if root.shape[1] == 0:
            logger.warning(f"Empty nullspace: {name} precoder of the SVD nulling baseline is void")
    return sigma_c_root, sigma_r_root


def _energy_mask(beamspace: np.ndarray, energy_fraction: float) -> np.ndarray:
    energy = np.abs(beamspace).ravel() ** 2
    total = energy.sum()
    mask = np.zeros(energy.size)
    if total <= 0.0:
        return mask.reshape(beamspace.shape)

    order = np.argsort(-energy, kind="stable")
    captured = np.cumsum(energy[order])
    count = min(int(np.searchsorted(captured, energy_fraction * total * (1.0 - 1e-12))) + 1, energy.size)
    mask[order[:count]] = 1.0
    return mask.reshape(beamspace.shape)


def beamspace_masks(
    h_c: np.ndarray,
    h_r: np.ndarray,
    f: np.ndarray,
    energy_fraction: float = DEFAULT_ENERGY_FRACTION,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Binary masks over the beamspace entries carrying each channel's energy.

    A mask marks the smallest set of entries of F^H H F holding at least ``energy_fraction``
    of its squared Frobenius norm, strongest first (ties go to the lower flat index).

    Args:
        h_c (np.ndarray): Communication channel.
        h_r (np.ndarray): Radar channel.
        f (np.ndarray): Codebook.
        energy_fraction (float): Fraction in (0, 1].

    Returns:
        Tuple[np.ndarray, np.ndarray]: (omega_c, omega_r) 0/1 matrices; all-zero for a zero channel.
    """
    if not 0.0 < energy_fraction <= 1.0:
        raise InvalidArgumentError(f"energy fraction must lie in (0, 1], got {energy_fraction}")
    if not h_c.shape == h_r.shape == f.shape:
        raise InvalidDimensionError(
            f"shape mismatch: h_c {h_c.shape}, h_r {h_r.shape}, f {f.shape}"
        )
    omega_c = _energy_mask(f.conj().T @ h_c @ f, energy_fraction)
    omega_r = _energy_mask(f.conj().T @ h_r @ f, energy_fraction)
    return omega_c, omega_r


def evaluate_baseline(
    kind: BaselineKind,
    channels: ChannelSet,
    scenario: Scenario,
    energy_fraction: float = DEFAULT_ENERGY_FRACTION,
    tol: float = RANK_TOLERANCE,
) -> MuiReport:
    """
    Weighted MUI of a comparison scheme on one channel realization.

    - no_interference: identity covariances, leakage ignored (upper bound).
    - with_interference: identity covariances, leakage added to the noise floors (lower bound).
    - svd_nulling: nullspace projectors, leakage included (and zero by construction).
    - beamspace_nulling: masked single-log MUI on the unitary DFT beamspace, rho weights inside the log.

    Args:
        kind (BaselineKind): Scheme to evaluate.
        channels (ChannelSet): Channel realization.
        scenario (Scenario): Supplies rho and the noise power.
        energy_fraction (float): Mask energy fraction of the beamspace scheme.
        tol (float): Rank tolerance of the nullspace extraction.

    Returns:
        MuiReport: The scheme's report; ``degenerate`` is set when a nulling precoder is empty.
    """
    kind = BaselineKind(kind)
    n = channels.dim
    noise_power, rho = scenario.noise_power, scenario.rho

    if kind in (BaselineKind.NO_INTERFERENCE, BaselineKind.WITH_INTERFERENCE):
        identity = np.eye(n)
        return mui_weighted(
            channels.h_c,
            channels.h_r,
            identity,
            identity,
            noise_power,
            rho,
            with_interference=kind is BaselineKind.WITH_INTERFERENCE,
        )

    if kind is BaselineKind.SVD_NULLING:
        sigma_c_root, sigma_r_root = svd_nulling_precoders(channels.h_c, channels.h_r, tol)
        report = mui_weighted(
            channels.h_c,
            channels.h_r,
            sigma_c_root @ sigma_c_root.conj().T,
            sigma_r_root @ sigma_r_root.conj().T,
            noise_power,
            rho,
            with_interference=True,
        )
        if sigma_c_root.shape[1] == 0 or sigma_r_root.shape[1] == 0:
            report = dataclasses.replace(report, degenerate=True)
        return report

    f = dft_matrix(n) / np.sqrt(n)
    omega_c, omega_r = beamspace_masks(channels.h_c, channels.h_r, f, energy_fraction)
    return mui_beamspace(
        channels.h,
        omega_c,
        omega_r,
        f,
        noise_power,
        h_c=channels.h_c,
        h_r=channels.h_r,
        weights=(2.0 * rho, 2.0 * (1.0 - rho)),
    )
