import itertools
import logging

import numpy as np
import pytest

from jrcbeam.base import Scenario
from jrcbeam.exceptions import OracleSizeError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.channel import (
    AngleSet,
    ChannelSet,
    analytic_covariances,
    draw_channel_set,
    place_angles,
    synthesize_channel,
    trial_rng,
)
from jrcbeam.model.numerics import dft_matrix
from jrcbeam.model.rfselect import (
    BeamScores,
    beam_scores,
    brute_force_oracle,
    covariance_scores,
    dinkelbach_select,
    selection_objective,
    selection_precoders,
    solve_relaxed,
    threshold_rho,
)
from jrcbeam.settings import SolverSettings

logger = logging.getLogger(LOGGER_NAME)


def grid_angle(k: int, n: int) -> float:
    return float(np.rad2deg(np.arcsin(2.0 * k / n - 1.0)))


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


@pytest.fixture
def rng():
    return np.random.default_rng(31)


def test_beam_scores_of_zero_channel():
    np.testing.assert_array_equal(beam_scores(dft_matrix(4), np.zeros((4, 4))), np.zeros(4))


def test_beam_scores_decompose_frobenius_norm(rng):
    f = dft_matrix(8)
    h = random_complex(rng, 8, 8)
    scores = beam_scores(f, h)
    assert scores.sum() == pytest.approx(np.linalg.norm(f.conj().T @ h) ** 2)
    d = np.array([1, 0, 1, 1, 0, 0, 1, 0], dtype=float)
    assert np.linalg.norm(np.diag(d) @ f.conj().T @ h) ** 2 == pytest.approx(d @ scores)


def test_beam_scores_of_grid_path():
    n = 16
    scores = beam_scores(dft_matrix(n), synthesize_channel([grid_angle(5, n)], [1.0], n))
    assert scores.max() >= 0.5 * scores.sum()


def test_covariance_scores_are_quadratic_forms(rng):
    f = dft_matrix(6)
    g = random_complex(rng, 6, 6)
    r = g @ g.conj().T
    expected = np.real(np.diag(f.conj().T @ r @ f))
    np.testing.assert_allclose(covariance_scores(f, r), expected, rtol=1e-10)


def test_solve_relaxed_simple_cases():
    signal = np.array([3.0, 2.0, 1.0])
    np.testing.assert_array_equal(solve_relaxed(signal, np.zeros(3), 1.0, 1.0), np.ones(3))
    np.testing.assert_array_equal(
        solve_relaxed(np.array([0.0, 2.0, 1.0]), np.ones(3) * 5, 0.0, 1.0), [0.0, 1.0, 1.0]
    )
    # zero coefficient resolves to 0
    np.testing.assert_array_equal(solve_relaxed(np.array([2.0]), np.array([1.0]), 2.0, 1.0), [0.0])


def test_solve_relaxed_matches_exhaustive_box_optimum(rng):
    for _ in range(50):
        signal, interf = rng.uniform(0, 1, 8), rng.uniform(0, 1, 8)
        kappa, noise = rng.uniform(0, 2), 0.1
        coefficients = signal - kappa * interf

        d = solve_relaxed(signal, interf, kappa, noise)
        value = d**2 @ coefficients - kappa * noise
        # the objective is convex, so the box maximum sits on a vertex
        best = max(
            np.array(v) @ coefficients - kappa * noise for v in itertools.product((0.0, 1.0), repeat=8)
        )
        assert value == pytest.approx(best, abs=1e-12)
        assert np.all((d == 0.0) | (d == 1.0))


def test_threshold_rho_cases():
    d, shortfall = threshold_rho(np.ones(4), np.array([0.1, 0.9, 0.5, 0.7]), 2)
    np.testing.assert_array_equal(d, [0, 1, 0, 1])
    assert not shortfall

    d, _ = threshold_rho(np.array([0, 1, 0, 1]), np.zeros(4), 2)
    np.testing.assert_array_equal(d, [0, 1, 0, 1])

    d, _ = threshold_rho(np.ones(3), np.ones(3), 0)
    np.testing.assert_array_equal(d, np.zeros(3))


def test_threshold_rho_breaks_full_ties_by_index():
    d, _ = threshold_rho(np.ones(5), np.ones(5), 2)
    np.testing.assert_array_equal(d, [1, 1, 0, 0, 0])


def test_threshold_rho_flags_shortfall(caplog):
    logger.propagate = True
    available = np.array([True, False, False, True])
    with caplog.at_level(logging.WARNING, logger=LOGGER_NAME):
        d, shortfall = threshold_rho(np.ones(4), np.zeros(4), 3, available)
    assert shortfall
    np.testing.assert_array_equal(d, [1, 0, 0, 1])
    assert "candidate beams" in caplog.text


def test_dinkelbach_rho_one_gives_everything_to_comms():
    scenario = Scenario(n_antennas=8, rho=1.0)
    selection, _ = dinkelbach_select(analytic_covariances(scenario, place_angles(scenario)), scenario)
    np.testing.assert_array_equal(selection.d_c, np.ones(8))
    np.testing.assert_array_equal(selection.d_r, np.zeros(8))


def test_dinkelbach_monotone_fixed_point_and_invariants():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        scenario = Scenario(
            n_antennas=32,
            n_users=int(rng.integers(1, 4)),
            n_targets=int(rng.integers(1, 4)),
            rho=0.5,
            snr_db=float(rng.uniform(-10, 20)),
            angle_range_deg=(-70.0, 70.0),
        )
        covariances = analytic_covariances(scenario, place_angles(scenario))
        selection, state = dinkelbach_select(covariances, scenario)

        trace = np.array(state.objective_trace)
        assert np.all(np.diff(trace) >= -1e-9)
        assert selection.d_c.sum() == 16 and selection.d_r.sum() == 16
        assert np.all(selection.d_c * selection.d_r == 0)

        scores = BeamScores.from_source(covariances, dft_matrix(32))
        noise = scenario.noise_power
        c_c = selection.d_c @ scores.total
        eta_c = noise + selection.d_c @ scores.radar
        c_r = selection.d_r @ scores.total
        eta_r = noise + selection.d_r @ scores.comms
        assert abs(c_c - state.kappa_c * eta_c) <= 1e-6 * max(c_c, 1.0)
        assert abs(c_r - state.kappa_r * eta_r) <= 1e-6 * max(c_r, 1.0)


def test_dinkelbach_separates_grid_user_and_target():
    n = 16
    scenario = Scenario(n_antennas=n, n_users=1, n_targets=1, rho=0.5, snr_db=10.0)
    angles = AngleSet(
        comms_angles_deg=[grid_angle(3, n)], radar_angles_deg=[grid_angle(12, n)]
    )
    covariances = analytic_covariances(scenario, angles)
    selection, _ = dinkelbach_select(covariances, scenario)

    f = dft_matrix(n)
    comms = covariance_scores(f, covariances.r_c)
    radar = covariance_scores(f, covariances.r_r)
    assert selection.d_c @ comms >= 0.99 * comms.sum()
    assert selection.d_c @ radar <= 0.01 * radar.sum()
    assert selection.d_r @ radar >= 0.99 * radar.sum()
    assert selection.d_r @ comms <= 0.01 * comms.sum()


def test_dinkelbach_depends_on_covariances_only():
    for pair in range(50):
        base = Scenario(n_antennas=16, n_users=2, n_targets=2, seed=2 * pair)
        other = base.model_copy(update={"seed": 2 * pair + 1})
        angles = place_angles(base)
        first_draw = draw_channel_set(base, angles, trial_rng(base.seed, 0))
        second_draw = draw_channel_set(other, angles, trial_rng(other.seed, 0))
        assert not np.allclose(first_draw.h, second_draw.h)

        first, _ = dinkelbach_select(analytic_covariances(base, angles), base)
        second, _ = dinkelbach_select(analytic_covariances(other, place_angles(other)), other)
        np.testing.assert_array_equal(first.d_c, second.d_c)
        np.testing.assert_array_equal(first.d_r, second.d_r)


def test_dinkelbach_overlapping_selection_when_not_disjoint():
    scenario = Scenario(n_antennas=8, n_users=1, n_targets=1, rho=0.75)
    options = SolverSettings(disjoint=False)
    selection, _ = dinkelbach_select(
        analytic_covariances(scenario, place_angles(scenario)), scenario, options
    )
    assert selection.d_c.sum() == 6 and selection.d_r.sum() == 2


def test_oracle_refuses_large_arrays():
    scenario = Scenario(n_antennas=12)
    zeros = np.zeros((12, 12))
    with pytest.raises(OracleSizeError):
        brute_force_oracle(ChannelSet.from_components(zeros, zeros), scenario)


def test_oracle_on_zero_channels_returns_first_assignment():
    scenario = Scenario(n_antennas=2, rho=0.5)
    zeros = np.zeros((2, 2))
    selection, value = brute_force_oracle(ChannelSet.from_components(zeros, zeros), scenario)
    assert value == 0.0
    np.testing.assert_array_equal(selection.d_c, [1, 0])
    np.testing.assert_array_equal(selection.d_r, [0, 1])


@pytest.mark.parametrize("n", [6, 8])
def test_oracle_bounds_dinkelbach(n):
    scenario = Scenario(n_antennas=n, n_users=2, n_targets=2, rho=0.5, snr_db=5.0)
    angles = place_angles(scenario)
    f = dft_matrix(n)
    near_optimal = 0
    for trial in range(100):
        channels = draw_channel_set(scenario, angles, trial_rng(17, trial))
        _, best = brute_force_oracle(channels, scenario)
        selection, _ = dinkelbach_select(channels, scenario)
        achieved = selection_objective(
            selection.d_c, selection.d_r, BeamScores.from_source(channels, f), scenario.noise_power
        )
        logger.debug(f"N={n} trial {trial}: oracle gap {best - achieved:.3g} bits")
        assert achieved <= best + 1e-12
        near_optimal += achieved >= 0.95 * best
    assert near_optimal >= 90


def test_selection_precoders_are_projectors():
    scenario = Scenario(n_antennas=8, rho=0.5)
    selection, _ = dinkelbach_select(analytic_covariances(scenario, place_angles(scenario)), scenario)
    sigma_c, sigma_r = selection_precoders(selection, dft_matrix(8))
    np.testing.assert_allclose(sigma_c @ sigma_c, sigma_c, atol=1e-10)
    assert np.trace(sigma_c).real == pytest.approx(4.0)
    assert np.trace(sigma_r).real == pytest.approx(4.0)
    np.testing.assert_allclose(sigma_c @ sigma_r, np.zeros((8, 8)), atol=1e-10)
