"""
Mutual-information and interference figures of merit.

Capacity terms use the H Sigma H^H ordering throughout, so an interference-aware
value can never exceed its interference-free counterpart.
"""

import logging
from dataclasses import dataclass
from typing import ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import find_peaks

from jrcbeam.exceptions import (
    InvalidArgumentError,
    InvalidDimensionError,
    NumericalConsistencyError,
)
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.channel import steering_matrix
from jrcbeam.model.numerics import logdet_cap

logger = logging.getLogger(LOGGER_NAME)

NRP_FLOOR_DB = -300.0


@dataclass(frozen=True)
class MuiReport:
    """
    Mutual information of one evaluation, in bits/s/Hz.

    Attributes:
        mui_bits (float): comms_term + radar_term.
        comms_term (float): Communication contribution (weighted when a weight applies).
        radar_term (float): Radar contribution (weighted when a weight applies).
        sigma_r_sq (float): Radar-channel power picked up by the communication precoder.
        sigma_c_sq (float): Communication-channel power picked up by the radar precoder.
        degenerate (bool): A precoder came out empty (e.g. trivial nullspace).
    """

    mui_bits: float
    comms_term: float
    radar_term: float
    sigma_r_sq: float = 0.0
    sigma_c_sq: float = 0.0
    degenerate: bool = False

    @classmethod
    def from_terms(
        cls,
        comms_term: float,
        radar_term: float,
        sigma_r_sq: float = 0.0,
        sigma_c_sq: float = 0.0,
        degenerate: bool = False,
    ) -> "MuiReport":
        return cls(
            mui_bits=comms_term + radar_term,
            comms_term=comms_term,
            radar_term=radar_term,
            sigma_r_sq=sigma_r_sq,
            sigma_c_sq=sigma_c_sq,
            degenerate=degenerate,
        )


@dataclass(frozen=True)
class Beampattern:
    """
    Normalized received power over an angle grid.

    Attributes:
        angles_deg (np.ndarray): Probe angles.
        nrp (np.ndarray): Power normalized to a maximum of 1 (linear).
        nrp_db (np.ndarray): 10 log10(nrp), floored at NRP_FLOOR_DB.
        zero_power (bool): Nothing was received; nrp is left at zero.
    """

    angles_deg: np.ndarray
    nrp: np.ndarray
    nrp_db: np.ndarray
    zero_power: bool = False

    columns: ClassVar[Tuple[str, ...]] = ("angle_deg", "nrp", "nrp_db")

    def to_records(self) -> List[Dict[str, float]]:
        return [
            {"angle_deg": float(a), "nrp": float(p), "nrp_db": float(db)}
            for a, p, db in zip(self.angles_deg, self.nrp, self.nrp_db)
        ]


def sigma_interference(h: np.ndarray, sigma: np.ndarray) -> float:
    """
    Leaked power tr(h sigma h^H), equal to ||h sigma^{1/2}||_F^2 for the principal root.

    Raises:
        NumericalConsistencyError: If the trace is negative beyond rounding.
    """
    value = float(np.real(np.trace(h @ sigma @ h.conj().T)))
    scale = max(float(np.real(np.trace(sigma))) * float(np.linalg.norm(h)) ** 2, np.finfo(float).tiny)
    if value < -1e-9 * scale:
        raise NumericalConsistencyError(f"negative interference power {value}")
    return max(value, 0.0)


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho <= 1.0:
        raise InvalidArgumentError(f"weighting factor rho must lie in [0, 1], got {rho}")


def mui_separate(
    h_c: np.ndarray,
    h_r: np.ndarray,
    sigma_c: np.ndarray,
    sigma_r: np.ndarray,
    noise_power: float,
) -> MuiReport:
    """Both subsystems on dedicated hardware: two capacity terms, no interference."""
    return MuiReport.from_terms(
        comms_term=logdet_cap(h_c, sigma_c, noise_power),
        radar_term=logdet_cap(h_r, sigma_r, noise_power),
    )


def mui_joint(
    h_c: np.ndarray,
    h_r: np.ndarray,
    sigma_c: np.ndarray,
    sigma_r: np.ndarray,
    noise_power: float,
) -> MuiReport:
    """
    Shared hardware: each capacity term sees the other operation's leakage as extra noise.

    sigma_r_sq = ||h_r sigma_c^{1/2}||^2 inflates the communication noise floor and
    sigma_c_sq = ||h_c sigma_r^{1/2}||^2 the radar one. Never exceeds mui_separate.
    """
    sigma_r_sq = sigma_interference(h_r, sigma_c)
    sigma_c_sq = sigma_interference(h_c, sigma_r)
    return MuiReport.from_terms(
        comms_term=logdet_cap(h_c, sigma_c, noise_power + sigma_r_sq),
        radar_term=logdet_cap(h_r, sigma_r, noise_power + sigma_c_sq),
        sigma_r_sq=sigma_r_sq,
        sigma_c_sq=sigma_c_sq,
    )


def mui_weighted(
    h_c: np.ndarray,
    h_r: np.ndarray,
    sigma_c: np.ndarray,
    sigma_r: np.ndarray,
    noise_power: float,
    rho: float,
    with_interference: bool = False,
) -> MuiReport:
    """
    Weighted MUI 2 rho T_C + 2 (1 - rho) T_R.

    Args:
        h_c, h_r (np.ndarray): Component channels.
        sigma_c, sigma_r (np.ndarray): Transmit covariances.
        noise_power (float): Noise variance.
        rho (float): Weighting factor in [0, 1].
        with_interference (bool): Add the cross leakage to each noise floor.

    Returns:
        MuiReport: Weighted terms; equals mui_separate for rho = 1/2 without interference.
    """
    _check_rho(rho)
    sigma_r_sq = sigma_c_sq = 0.0
    if with_interference:
        sigma_r_sq = sigma_interference(h_r, sigma_c)
        sigma_c_sq = sigma_interference(h_c, sigma_r)

    comms_term = radar_term = 0.0
    if rho > 0.0:
        comms_term = 2.0 * rho * logdet_cap(h_c, sigma_c, noise_power + sigma_r_sq)
    if rho < 1.0:
        radar_term = 2.0 * (1.0 - rho) * logdet_cap(h_r, sigma_r, noise_power + sigma_c_sq)
    return MuiReport.from_terms(comms_term, radar_term, sigma_r_sq, sigma_c_sq)


def _check_mask(mask: np.ndarray, shape: Tuple[int, ...], name: str) -> np.ndarray:
    mask = np.asarray(mask)
    if mask.shape != shape:
        raise InvalidDimensionError(f"{name} has shape {mask.shape}, expected {shape}")
    if not np.all((mask == 0) | (mask == 1)):
        raise InvalidArgumentError(f"{name} must be a 0/1 matrix")
    return mask.astype(float)


def mui_beamspace(
    h: np.ndarray,
    omega_c: np.ndarray,
    omega_r: np.ndarray,
    f: np.ndarray,
    noise_power: float,
    h_c: Optional[np.ndarray] = None,
    h_r: Optional[np.ndarray] = None,
    weights: Tuple[float, float] = (1.0, 1.0),
) -> MuiReport:
    """
    Beamspace-masked MUI: a single log2(1 + w_C a + w_R b).

    a = ||Omega_C o (F^H H F)||^2 / (noise + i_C) and b likewise for radar. With the
    component channels, i_C = ||Omega_C o (F^H H_R F)||^2 and i_R = ||Omega_R o (F^H H_C F)||^2.
    Without them the energy on entries claimed by both masks stands in for both leakages.
    The default weights give the plain unweighted expression.

    Returns:
        MuiReport: comms_term and radar_term split the total in proportion to w_C a and w_R b.
    """
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise power must be positive, got {noise_power}")
    if h.shape != f.shape or h.ndim != 2:
        raise InvalidDimensionError(f"channel {h.shape} and codebook {f.shape} differ")
    omega_c = _check_mask(omega_c, h.shape, "omega_c")
    omega_r = _check_mask(omega_r, h.shape, "omega_r")

    beamspace = f.conj().T @ h @ f
    signal_c = float(np.sum(np.abs(omega_c * beamspace) ** 2))
    signal_r = float(np.sum(np.abs(omega_r * beamspace) ** 2))
    if h_c is not None and h_r is not None:
        interference_c = float(np.sum(np.abs(omega_c * (f.conj().T @ h_r @ f)) ** 2))
        interference_r = float(np.sum(np.abs(omega_r * (f.conj().T @ h_c @ f)) ** 2))
    else:
        overlap = float(np.sum(np.abs(omega_c * omega_r * beamspace) ** 2))
        interference_c = interference_r = overlap

    ratio_c = weights[0] * signal_c / (noise_power + interference_c)
    ratio_r = weights[1] * signal_r / (noise_power + interference_r)
    total = float(np.log2(1.0 + ratio_c + ratio_r))
    share_c = ratio_c / (ratio_c + ratio_r) if ratio_c + ratio_r > 0 else 0.5
    return MuiReport(
        mui_bits=total,
        comms_term=total * share_c,
        radar_term=total - total * share_c,
        sigma_r_sq=interference_c,
        sigma_c_sq=interference_r,
    )


def interference_covariance(r: np.ndarray, f_rf: np.ndarray, d: np.ndarray) -> float:
    """
    Expected leakage tr(R F_RF diag(d) F_RF^H) of the beams selected by d into a channel with covariance R.

    Args:
        r (np.ndarray): Channel covariance, PSD.
        f_rf (np.ndarray): Analog codebook (columns are beams).
        d (np.ndarray): Selection weights, one per column.

    Returns:
        float: The leakage, >= 0.

    Raises:
        NumericalConsistencyError: If the trace is below -1e-9 tr(R).
    """
    d = np.asarray(d, dtype=float)
    if d.shape != (f_rf.shape[1],) or r.shape != (f_rf.shape[0], f_rf.shape[0]):
        raise InvalidDimensionError(
            f"incompatible shapes: r {r.shape}, f_rf {f_rf.shape}, d {d.shape}"
        )
    per_beam = np.real(np.einsum("in,ij,jn->n", f_rf.conj(), r, f_rf))
    value = float(per_beam @ d)
    scale = max(abs(float(np.real(np.trace(r)))), np.finfo(float).tiny)
    if value < -1e-9 * scale:
        raise NumericalConsistencyError(f"negative covariance interference {value}")
    return max(value, 0.0)


def nrp_beampattern(
    h_r: np.ndarray,
    f_r: np.ndarray,
    grid: Sequence[float],
    n: int,
    spacing: float = 0.5,
) -> Beampattern:
    """
    Radar beampattern p(theta) = ||a(theta)^H H_R F_R||^2, normalized to its maximum.

    Each probe row is a unit-norm receive steering vector, so no extra probe normalization
    is needed.

    Args:
        h_r (np.ndarray): Radar channel.
        f_r (np.ndarray): Radar precoder (N x columns).
        grid (Sequence[float]): Probe angles in degrees, nonempty.
        n (int): Number of antennas.
        spacing (float): d / lambda.

    Returns:
        Beampattern: Normalized pattern; zero_power is set when nothing is received.
    """
    angles = np.asarray(grid, dtype=float)
    if angles.size == 0:
        raise InvalidArgumentError("beampattern grid is empty")
    probe = steering_matrix(angles, n, spacing).conj().T
    power = np.sum(np.abs(probe @ h_r @ f_r) ** 2, axis=1)

    peak = float(power.max())
    if peak <= 0.0:
        logger.warning("Radar precoder receives no power; beampattern left at zero")
        nrp = np.zeros_like(power)
        return Beampattern(angles, nrp, np.full_like(power, NRP_FLOOR_DB), zero_power=True)

    nrp = power / peak
    with np.errstate(divide="ignore"):
        nrp_db = np.maximum(10.0 * np.log10(nrp), NRP_FLOOR_DB)
    return Beampattern(angles, nrp, nrp_db)


def beampattern_peaks(pattern: Beampattern, count: int) -> np.ndarray:
    """Angles of the ``count`` largest local maxima of the pattern, in ascending angle order."""
    indices, properties = find_peaks(pattern.nrp, height=0.0)
    strongest = indices[np.argsort(properties["peak_heights"])[::-1][:count]]
    return np.sort(pattern.angles_deg[strongest])


def capacity_approximation(
    h: np.ndarray,
    h_c: np.ndarray,
    h_r: np.ndarray,
    f: np.ndarray,
    d_c: np.ndarray,
    d_r: np.ndarray,
    noise_power: float,
) -> Tuple[float, float]:
    """
    Exact selection capacity and its first-order Taylor approximation.

    x = ||(F D_C)^H H||^2 / (noise + ||(F D_C)^H H_R||^2) + ||(F D_R)^H H||^2 / (noise + ||(F D_R)^H H_C||^2).

    Returns:
        Tuple[float, float]: (log2(1 + x), x / ln 2).
    """
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise power must be positive, got {noise_power}")
    fc = f * np.asarray(d_c, dtype=float)
    fr = f * np.asarray(d_r, dtype=float)
    ratio_c = np.linalg.norm(fc.conj().T @ h) ** 2 / (
        noise_power + np.linalg.norm(fc.conj().T @ h_r) ** 2
    )
    ratio_r = np.linalg.norm(fr.conj().T @ h) ** 2 / (
        noise_power + np.linalg.norm(fr.conj().T @ h_c) ** 2
    )
    x = float(ratio_c + ratio_r)
    return float(np.log2(1.0 + x)), x / float(np.log(2.0))
