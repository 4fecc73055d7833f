import numpy as np
import pytest
from pydantic import ValidationError

from jrcbeam.base import Scenario
from jrcbeam.exceptions import (
    BeamspaceResolutionWarning,
    InvalidArgumentError,
    InvalidDimensionError,
)
from jrcbeam.model.channel import (
    AngleSet,
    ChannelSet,
    analytic_covariances,
    complex_gains,
    draw_channel_set,
    place_angles,
    steering_matrix,
    steering_vector,
    synthesize_channel,
    trial_rng,
)
from jrcbeam.model.numerics import dft_matrix


def grid_angle(k: int, n: int) -> float:
    """Angle whose steering vector coincides with a DFT codebook column."""
    return float(np.rad2deg(np.arcsin(2.0 * k / n - 1.0)))


def test_steering_vector_broadside():
    np.testing.assert_allclose(steering_vector(0.0, 5), np.full(5, 1 / np.sqrt(5)))


def test_steering_vector_thirty_degrees():
    np.testing.assert_allclose(
        steering_vector(30.0, 2, 0.5), np.array([1.0, 1j]) / np.sqrt(2), atol=1e-12
    )


@pytest.mark.parametrize("angle, n", [(-89.0, 3), (12.5, 16), (60.0, 64), (200.0, 7)])
def test_steering_vector_unit_norm(angle, n):
    assert np.linalg.norm(steering_vector(angle, n)) == pytest.approx(1.0, abs=1e-12)


def test_steering_matrix_stacks_columns():
    a = steering_matrix([-10.0, 40.0], 6)
    np.testing.assert_allclose(a[:, 1], steering_vector(40.0, 6))
    with pytest.raises(InvalidDimensionError):
        steering_matrix([0.0], 0)


def test_place_angles_one_user_one_target():
    angles = place_angles(Scenario(n_users=1, n_targets=1, angle_range_deg=(-60, 60)))
    assert angles.comms_angles_deg == pytest.approx([-20.0])
    assert angles.radar_angles_deg == pytest.approx([20.0])


def test_place_angles_targets_only():
    angles = place_angles(Scenario(n_users=0, n_targets=3))
    assert angles.comms_angles_deg == []
    assert angles.radar_angles_deg == pytest.approx([-30.0, 0.0, 30.0])


def test_place_angles_alternates():
    angles = place_angles(Scenario(n_antennas=16, n_users=3, n_targets=3))
    grid = [-60.0 + (i + 1) * 120.0 / 7 for i in range(6)]
    assert angles.comms_angles_deg == pytest.approx(grid[0::2])
    assert angles.radar_angles_deg == pytest.approx(grid[1::2])


def test_place_angles_fills_with_remaining_group():
    angles = place_angles(Scenario(n_antennas=8, n_users=1, n_targets=3))
    assert len(angles.comms_angles_deg) == 1
    assert len(angles.radar_angles_deg) == 3
    assert set(angles.comms_angles_deg).isdisjoint(angles.radar_angles_deg)


def test_scenario_needs_a_user_or_target():
    with pytest.raises(ValidationError, match=r"n_users \+ n_targets"):
        Scenario(n_users=0, n_targets=0)


def test_place_angles_rejects_empty_scenario():
    with pytest.raises(InvalidArgumentError):
        place_angles(Scenario.model_construct(n_users=0, n_targets=0))


def test_place_angles_warns_beyond_resolution():
    with pytest.warns(BeamspaceResolutionWarning):
        place_angles(Scenario(n_antennas=2, n_users=2, n_targets=1))


def test_synthesize_single_unit_path():
    h = synthesize_channel([15.0], [1.0], 16)
    assert np.linalg.norm(h) == pytest.approx(16.0, rel=1e-12)
    assert np.linalg.matrix_rank(h) == 1


def test_synthesize_zero_gains_and_no_paths():
    np.testing.assert_array_equal(synthesize_channel([10.0, 20.0], [0.0, 0.0], 4), np.zeros((4, 4)))
    np.testing.assert_array_equal(synthesize_channel([], [], 4), np.zeros((4, 4)))


def test_synthesize_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        synthesize_channel([10.0, 20.0], [1.0], 4)


def test_synthesize_is_linear_in_gains():
    rng = np.random.default_rng(3)
    angles = [-40.0, 5.0, 33.0]
    alpha, beta = complex_gains(rng, 3), complex_gains(rng, 3)
    np.testing.assert_allclose(
        synthesize_channel(angles, alpha + beta, 12),
        synthesize_channel(angles, alpha, 12) + synthesize_channel(angles, beta, 12),
        atol=1e-12,
    )


def test_synthesize_mean_energy():
    rng = np.random.default_rng(11)
    angles = [-45.0, -10.0, 20.0, 50.0]
    energy = [
        np.linalg.norm(synthesize_channel(angles, complex_gains(rng, 4), 16)) ** 2
        for _ in range(10000)
    ]
    assert np.mean(energy) == pytest.approx(256.0, rel=0.05)


def test_channel_set_requires_matching_shapes():
    with pytest.raises(InvalidDimensionError):
        ChannelSet.from_components(np.zeros((2, 2)), np.zeros((3, 3)))


def test_draw_without_targets():
    scenario = Scenario(n_antennas=8, n_users=2, n_targets=0)
    channels = draw_channel_set(scenario, place_angles(scenario), trial_rng(0, 0))
    np.testing.assert_array_equal(channels.h_r, np.zeros((8, 8)))
    np.testing.assert_array_equal(channels.h, channels.h_c)


def test_draw_is_reproducible():
    scenario = Scenario(n_antennas=8, n_users=2, n_targets=2)
    angles = place_angles(scenario)
    first = draw_channel_set(scenario, angles, trial_rng(5, 3))
    second = draw_channel_set(scenario, angles, trial_rng(5, 3))
    np.testing.assert_array_equal(first.h, second.h)
    np.testing.assert_array_equal(first.h_c, second.h_c)


def test_seed_changes_gains_not_angles():
    one, other = Scenario(seed=1), Scenario(seed=2)
    assert place_angles(one) == place_angles(other)
    angles = place_angles(one)
    h_one = draw_channel_set(one, angles, trial_rng(one.seed, 0)).h
    h_other = draw_channel_set(other, angles, trial_rng(other.seed, 0)).h
    assert not np.allclose(h_one, h_other)


def test_separated_paths_occupy_different_beams():
    scenario = Scenario(n_antennas=32, n_users=1, n_targets=1)
    channels = draw_channel_set(scenario, place_angles(scenario), trial_rng(0, 0))
    f = dft_matrix(32)
    rows_c = np.sum(np.abs(f.conj().T @ channels.h_c @ f) ** 2, axis=1)
    rows_r = np.sum(np.abs(f.conj().T @ channels.h_r @ f) ** 2, axis=1)
    assert np.argmax(rows_c) != np.argmax(rows_r)


def test_grid_aligned_path_concentrates_in_one_row():
    n = 16
    h = synthesize_channel([grid_angle(4, n)], [1.0], n)
    f = dft_matrix(n)
    rows = np.sum(np.abs(f.conj().T @ h @ f) ** 2, axis=1)
    assert rows.max() >= 0.5 * rows.sum()


def test_analytic_covariances_add_up():
    scenario = Scenario(n_antennas=8, n_users=2, n_targets=1)
    covariances = analytic_covariances(scenario, place_angles(scenario))
    np.testing.assert_allclose(covariances.r, covariances.r_c + covariances.r_r)
    np.testing.assert_allclose(covariances.r_c, covariances.r_c.conj().T)
    assert np.trace(covariances.r_c).real == pytest.approx(64.0)
    assert covariances.dim == 8


def test_trial_streams_are_independent():
    assert trial_rng(0, 0).standard_normal() == trial_rng(0, 0).standard_normal()
    assert trial_rng(0, 0).standard_normal() != trial_rng(0, 1).standard_normal()


def test_angle_set_defaults_are_empty():
    assert AngleSet() == AngleSet(comms_angles_deg=[], radar_angles_deg=[])
