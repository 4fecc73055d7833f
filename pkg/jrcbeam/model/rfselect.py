"""
RF-chain selection over the DFT codebook by Dinkelbach fractional programming.

Selecting beam n for an operation adds s_n to its signal power and the other
channel's score to its interference, so every ratio is a sum of per-beam terms
and each parametric subproblem separates over the codebook columns.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from jrcbeam.base import Scenario
from jrcbeam.exceptions import InvalidArgumentError, InvalidDimensionError, OracleSizeError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.channel import ChannelSet
from jrcbeam.model.numerics import CovarianceSet, dft_matrix
from jrcbeam.settings import SolverSettings

logger = logging.getLogger(LOGGER_NAME)

ORACLE_MAX_ANTENNAS = 10


@dataclass(frozen=True)
class Selection:
    """
    Codebook columns switched to each operation.

    Attributes:
        d_c (np.ndarray): 0/1 vector, communication beams.
        d_r (np.ndarray): 0/1 vector, radar beams.
        relaxed_c (np.ndarray): Box-relaxed solution the communication beams were thresholded from.
        relaxed_r (np.ndarray): Box-relaxed solution the radar beams were thresholded from.
        shortfall (bool): Fewer candidates than the requested cardinality were available.
    """

    d_c: np.ndarray
    d_r: np.ndarray
    relaxed_c: np.ndarray
    relaxed_r: np.ndarray
    shortfall: bool = False


@dataclass
class DinkelbachState:
    """
    Ratio parameters and progress of the Dinkelbach iterations.

    objective_trace holds kappa_c + kappa_r of every accepted iterate.
    """

    kappa_c: float = 1.0
    kappa_r: float = 1.0
    iteration: int = 0
    objective_trace: List[float] = field(default_factory=list)
    converged: bool = False


@dataclass(frozen=True)
class BeamScores:
    """Per-beam power of the combined, communication and radar channels."""

    total: np.ndarray
    comms: np.ndarray
    radar: np.ndarray

    @classmethod
    def from_source(
        cls, source: Union[CovarianceSet, ChannelSet], f: np.ndarray
    ) -> "BeamScores":
        if isinstance(source, CovarianceSet):
            return cls(
                total=covariance_scores(f, source.r),
                comms=covariance_scores(f, source.r_c),
                radar=covariance_scores(f, source.r_r),
            )
        return cls(
            total=beam_scores(f, source.h),
            comms=beam_scores(f, source.h_c),
            radar=beam_scores(f, source.h_r),
        )


def beam_scores(f: np.ndarray, h: np.ndarray) -> np.ndarray:
    """
    s_n = ||row_n(F^H h)||^2, so that ||diag(d) F^H h||_F^2 = sum_n d_n^2 s_n.

    Args:
        f (np.ndarray): Codebook (N x N).
        h (np.ndarray): Channel with N rows.

    Returns:
        np.ndarray: Nonnegative scores, one per codebook column.
    """
    if f.ndim != 2 or h.ndim != 2 or f.shape[0] != h.shape[0]:
        raise InvalidDimensionError(f"codebook {f.shape} and channel {h.shape} are not conformal")
    return np.sum(np.abs(f.conj().T @ h) ** 2, axis=1)


def covariance_scores(f: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Second-order counterpart of beam_scores: s_n = f_n^H R f_n."""
    if f.ndim != 2 or r.shape != (f.shape[0], f.shape[0]):
        raise InvalidDimensionError(f"codebook {f.shape} and covariance {r.shape} are not conformal")
    scores = np.real(np.einsum("in,ij,jn->n", f.conj(), r, f))
    return np.clip(scores, 0.0, None)


def solve_relaxed(
    signal_scores: np.ndarray,
    interf_scores: np.ndarray,
    kappa: float,
    noise_power: float,
) -> np.ndarray:
    """
    Maximizes sum_n d_n^2 (signal_n - kappa interf_n) - kappa noise_power over d in [0, 1]^N.

    The objective separates, so d_n = 1 where the coefficient is positive and 0 otherwise
    (a zero coefficient resolves to 0).

    Args:
        signal_scores (np.ndarray): Nonnegative signal scores.
        interf_scores (np.ndarray): Nonnegative interference scores, same length.
        kappa (float): Dinkelbach parameter, >= 0.
        noise_power (float): Noise variance, > 0.

    Returns:
        np.ndarray: Optimal relaxed vector (entries 0.0 or 1.0).
    """
    signal_scores = np.asarray(signal_scores, dtype=float)
    interf_scores = np.asarray(interf_scores, dtype=float)
    if signal_scores.shape != interf_scores.shape or signal_scores.ndim != 1:
        raise InvalidDimensionError(
            f"score vectors differ: {signal_scores.shape} vs {interf_scores.shape}"
        )
    if kappa < 0:
        raise InvalidArgumentError(f"kappa must be nonnegative, got {kappa}")
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise power must be positive, got {noise_power}")
    return (signal_scores - kappa * interf_scores > 0.0).astype(float)


def threshold_rho(
    relaxed: np.ndarray,
    ranking_scores: np.ndarray,
    cardinality: int,
    available: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, bool]:
    """
    Cardinality-constrained top-k of a relaxed solution.

    Candidates are ordered by relaxed value, then ranking score (both descending), then index.

    Args:
        relaxed (np.ndarray): Relaxed solution.
        ranking_scores (np.ndarray): Tie-break scores.
        cardinality (int): Number of ones to place.
        available (Optional[np.ndarray]): Boolean mask of candidate indices; all when None.

    Returns:
        Tuple[np.ndarray, bool]: The 0/1 vector and whether candidates ran short of ``cardinality``.
    """
    relaxed = np.asarray(relaxed, dtype=float)
    ranking_scores = np.asarray(ranking_scores, dtype=float)
    n = relaxed.size
    if ranking_scores.shape != relaxed.shape:
        raise InvalidDimensionError("relaxed solution and ranking scores differ in length")
    if not 0 <= cardinality <= n:
        raise InvalidArgumentError(f"cardinality {cardinality} outside [0, {n}]")

    candidates = np.arange(n) if available is None else np.flatnonzero(available)
    shortfall = cardinality > candidates.size
    if shortfall:
        logger.warning(
            f"Only {candidates.size} candidate beams left for a selection of {cardinality}"
        )

    order = np.lexsort((candidates, -ranking_scores[candidates], -relaxed[candidates]))
    chosen = candidates[order[: min(cardinality, candidates.size)]]
    d = np.zeros(n)
    d[chosen] = 1.0
    return d, shortfall


def _ratios(
    d_c: np.ndarray, d_r: np.ndarray, scores: BeamScores, noise_power: float
) -> Tuple[float, float, float, float]:
    c_c = float(d_c**2 @ scores.total)
    eta_c = max(noise_power + float(d_c**2 @ scores.radar), noise_power)
    c_r = float(d_r**2 @ scores.total)
    eta_r = max(noise_power + float(d_r**2 @ scores.comms), noise_power)
    return c_c, eta_c, c_r, eta_r


def selection_objective(
    d_c: np.ndarray, d_r: np.ndarray, scores: BeamScores, noise_power: float
) -> float:
    """log2(1 + c_C / eta_C + c_R / eta_R) of a selection."""
    c_c, eta_c, c_r, eta_r = _ratios(d_c, d_r, scores, noise_power)
    return float(np.log2(1.0 + c_c / eta_c + c_r / eta_r))


def selection_precoders(selection: Selection, f: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Transmit covariances of a selection with identity baseband.

    With the unnormalized codebook (F F^H = N I) both (1/N) F D_C F^H and (1/N) F D_R F^H
    are orthogonal projectors.
    """
    n = f.shape[0]
    sigma_c = (f * selection.d_c) @ f.conj().T / n
    sigma_r = (f * selection.d_r) @ f.conj().T / n
    return sigma_c, sigma_r


def dinkelbach_select(
    source: Union[CovarianceSet, ChannelSet],
    scenario: Scenario,
    options: Optional[SolverSettings] = None,
) -> Tuple[Selection, DinkelbachState]:
    """
    Proposed RF-chain selection.

    Starting from kappa_c = kappa_r = 1, every iteration solves both relaxed subproblems,
    thresholds them to ceil(rho N) communication and N - ceil(rho N) radar beams (radar only
    among the beams communications left free when disjoint), and sets each kappa to the new
    selection's c / eta. An iterate that lowers kappa_c + kappa_r is discarded and ends the
    search; otherwise the loop stops once both kappas move by at most the tolerance.

    Args:
        source (Union[CovarianceSet, ChannelSet]): Covariances score beams by f_n^H R f_n,
            a channel realization by instantaneous norms.
        scenario (Scenario): Supplies N, rho and the noise power.
        options (Optional[SolverSettings]): Iteration cap, tolerance and disjointness.

    Returns:
        Tuple[Selection, DinkelbachState]: The last accepted selection and the solver state.
    """
    options = options or SolverSettings()
    n = scenario.n_antennas
    noise_power = scenario.noise_power
    if source.dim != n:
        raise InvalidDimensionError(
            f"inputs are {source.dim}-dimensional, scenario has {n} antennas"
        )
    if options.max_iterations < 1:
        raise InvalidArgumentError(f"need at least one iteration, got {options.max_iterations}")

    f = dft_matrix(n)
    scores = BeamScores.from_source(source, f)
    k_c, k_r = scenario.comms_beams, scenario.radar_beams

    state = DinkelbachState()
    half = np.full(n, 0.5)
    logger.debug(
        f"Dinkelbach start: N={n}, k_c={k_c}, k_r={k_r}, "
        f"objective at d=1/2: {selection_objective(half, half, scores, noise_power):.6g}"
    )

    selection: Optional[Selection] = None
    for iteration in range(1, options.max_iterations + 1):
        relaxed_c = solve_relaxed(scores.total, scores.radar, state.kappa_c, noise_power)
        d_c, short_c = threshold_rho(
            relaxed_c, scores.total - state.kappa_c * scores.radar, k_c
        )
        relaxed_r = solve_relaxed(scores.total, scores.comms, state.kappa_r, noise_power)
        d_r, short_r = threshold_rho(
            relaxed_r,
            scores.total - state.kappa_r * scores.comms,
            k_r,
            available=d_c == 0 if options.disjoint else None,
        )

        c_c, eta_c, c_r, eta_r = _ratios(d_c, d_r, scores, noise_power)
        kappa_c, kappa_r = c_c / eta_c, c_r / eta_r
        value = kappa_c + kappa_r
        if state.objective_trace and value < state.objective_trace[-1]:
            logger.debug(f"Iteration {iteration} would lower the objective to {value:.9g}; stopping")
            break

        selection = Selection(d_c, d_r, relaxed_c, relaxed_r, shortfall=short_c or short_r)
        step = max(abs(kappa_c - state.kappa_c), abs(kappa_r - state.kappa_r))
        state.kappa_c, state.kappa_r = kappa_c, kappa_r
        state.iteration = iteration
        state.objective_trace.append(value)
        logger.debug(
            f"Iteration {iteration}: kappa_c={kappa_c:.9g}, kappa_r={kappa_r:.9g}, step={step:.3g}"
        )
        if step <= options.kappa_tolerance:
            state.converged = True
            break

    if not state.converged:
        logger.debug(f"Dinkelbach stopped after {state.iteration} iteration(s) without kappa convergence")
    return selection, state


def brute_force_oracle(
    channels: ChannelSet, scenario: Scenario, disjoint: bool = True
) -> Tuple[Selection, float]:
    """
    Exhaustive search of the selection maximizing log2(1 + c_C / eta_C + c_R / eta_R).

    Assignments are enumerated in lexicographic order and only a strictly better value
    replaces the incumbent, so ties go to the first one.

    Args:
        channels (ChannelSet): Channel realization (instantaneous scores).
        scenario (Scenario): Supplies N, rho and the noise power.
        disjoint (bool): Radar only among the beams communications left free.

    Returns:
        Tuple[Selection, float]: The maximizer (relaxed fields equal the binary vectors) and its value.

    Raises:
        OracleSizeError: If N exceeds ORACLE_MAX_ANTENNAS.
    """
    n = scenario.n_antennas
    if n > ORACLE_MAX_ANTENNAS:
        raise OracleSizeError(
            f"exhaustive search is limited to {ORACLE_MAX_ANTENNAS} antennas, got {n}"
        )
    if channels.dim != n:
        raise InvalidDimensionError(f"channels are {channels.dim}-dimensional, scenario has {n} antennas")

    scores = BeamScores.from_source(channels, dft_matrix(n))
    k_c, k_r = scenario.comms_beams, scenario.radar_beams

    best_value, best = -np.inf, None
    for comms in itertools.combinations(range(n), k_c):
        d_c = np.zeros(n)
        d_c[list(comms)] = 1.0
        pool = [i for i in range(n) if not (disjoint and d_c[i])]
        for radar in itertools.combinations(pool, k_r):
            d_r = np.zeros(n)
            d_r[list(radar)] = 1.0
            value = selection_objective(d_c, d_r, scores, scenario.noise_power)
            if value > best_value:
                best_value, best = value, (d_c, d_r)

    d_c, d_r = best
    return Selection(d_c, d_r, d_c.copy(), d_r.copy()), float(best_value)
