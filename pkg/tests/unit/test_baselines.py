import logging

import numpy as np
import pytest

from jrcbeam.base import Scenario
from jrcbeam.exceptions import InvalidArgumentError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.model.baselines import (
    BaselineKind,
    beamspace_masks,
    evaluate_baseline,
    svd_nulling_precoders,
)
from jrcbeam.model.channel import (
    ChannelSet,
    draw_channel_set,
    place_angles,
    synthesize_channel,
    trial_rng,
)
from jrcbeam.model.numerics import dft_matrix

logger = logging.getLogger(LOGGER_NAME)


def grid_angle(k: int, n: int) -> float:
    return float(np.rad2deg(np.arcsin(2.0 * k / n - 1.0)))


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


@pytest.fixture
def rng():
    return np.random.default_rng(99)


@pytest.fixture
def grid_channels():
    """One user and one target on distinct DFT beams of a 16-element array."""
    n = 16
    h_c = synthesize_channel([grid_angle(4, n)], [1.0], n)
    h_r = synthesize_channel([grid_angle(12, n)], [0.7 - 0.2j], n)
    return ChannelSet.from_components(h_c, h_r)


def test_svd_nulling_with_silent_radar():
    root_c, root_r = svd_nulling_precoders(np.eye(4), np.zeros((4, 4)))
    assert root_c.shape == (4, 4)
    np.testing.assert_allclose(root_c.conj().T @ root_c, np.eye(4), atol=1e-10)
    assert root_r.shape == (4, 0)


def test_svd_nulling_rank_deficient(rng):
    h_c = random_complex(rng, 8, 2) @ random_complex(rng, 2, 8)
    h_r = random_complex(rng, 8, 3) @ random_complex(rng, 3, 8)
    root_c, root_r = svd_nulling_precoders(h_c, h_r)
    assert root_c.shape == (8, 5)
    assert root_r.shape == (8, 6)
    assert np.linalg.norm(h_r @ root_c) < 1e-9 * np.linalg.norm(h_r)
    assert np.linalg.norm(h_c @ root_r) < 1e-9 * np.linalg.norm(h_c)


def test_svd_nulling_full_rank_is_degenerate(rng, caplog):
    logger.propagate = True
    channels = ChannelSet.from_components(random_complex(rng, 6, 6), random_complex(rng, 6, 6))
    with caplog.at_level(logging.WARNING, logger=LOGGER_NAME):
        report = evaluate_baseline(BaselineKind.SVD_NULLING, channels, Scenario(n_antennas=6))
    assert report.degenerate
    assert report.mui_bits == 0.0
    assert "Empty nullspace" in caplog.text


def test_beamspace_mask_of_grid_path():
    n = 16
    f = dft_matrix(n) / np.sqrt(n)
    h_c = synthesize_channel([grid_angle(4, n)], [1.0], n)
    omega_c, omega_r = beamspace_masks(h_c, np.zeros((n, n)), f, energy_fraction=0.9)
    assert 1 <= omega_c.sum() <= 2
    assert omega_r.sum() == 0


def test_beamspace_masks_are_disjoint_for_separated_paths(grid_channels):
    f = dft_matrix(16) / 4.0
    omega_c, omega_r = beamspace_masks(grid_channels.h_c, grid_channels.h_r, f)
    assert np.all(omega_c * omega_r == 0)
    assert set(np.unique(omega_c)) <= {0.0, 1.0}


def test_beamspace_mask_is_minimal(rng):
    n = 8
    f = dft_matrix(n) / np.sqrt(n)
    h_c = synthesize_channel([-33.3, 7.1, 41.9], [1.0, 0.6, 0.3j], n)
    omega_c, _ = beamspace_masks(h_c, np.zeros((n, n)), f, energy_fraction=0.95)

    energy = np.abs(f.conj().T @ h_c @ f) ** 2
    captured = np.sum(omega_c * energy)
    assert captured >= 0.95 * energy.sum() * (1 - 1e-12)
    weakest = np.min(energy[omega_c == 1])
    assert captured - weakest < 0.95 * energy.sum()


def test_beamspace_mask_rejects_bad_fraction():
    with pytest.raises(InvalidArgumentError):
        beamspace_masks(np.eye(4), np.eye(4), dft_matrix(4), energy_fraction=0.0)


def test_no_interference_dominates(rng):
    scenario = Scenario(n_antennas=16, n_users=2, n_targets=2, rho=0.5, snr_db=5.0)
    angles = place_angles(scenario)
    for trial in range(20):
        channels = draw_channel_set(scenario, angles, trial_rng(3, trial))
        upper = evaluate_baseline(BaselineKind.NO_INTERFERENCE, channels, scenario).mui_bits
        for kind in (BaselineKind.WITH_INTERFERENCE, BaselineKind.SVD_NULLING):
            assert evaluate_baseline(kind, channels, scenario).mui_bits <= upper + 1e-9


def test_no_interference_dominates_beamspace_on_grid(grid_channels):
    scenario = Scenario(n_antennas=16, rho=0.5, snr_db=0.0)
    upper = evaluate_baseline(BaselineKind.NO_INTERFERENCE, grid_channels, scenario).mui_bits
    beamspace = evaluate_baseline(BaselineKind.BEAMSPACE_NULLING, grid_channels, scenario)
    assert 0.0 < beamspace.mui_bits <= upper


@pytest.mark.parametrize("kind", list(BaselineKind))
def test_zero_channels_give_zero(kind):
    zeros = np.zeros((8, 8))
    channels = ChannelSet.from_components(zeros, zeros)
    assert evaluate_baseline(kind, channels, Scenario(n_antennas=8)).mui_bits == 0.0


def test_no_interference_comms_term_ignores_radar(rng):
    scenario = Scenario(n_antennas=6, rho=0.4)
    h_c = random_complex(rng, 6, 6)
    first = ChannelSet.from_components(h_c, random_complex(rng, 6, 6))
    second = ChannelSet.from_components(h_c, 10 * random_complex(rng, 6, 6))
    comms_first = evaluate_baseline("no_interference", first, scenario).comms_term
    comms_second = evaluate_baseline("no_interference", second, scenario).comms_term
    assert comms_first == pytest.approx(comms_second)


def test_svd_nulling_reaches_upper_bound_without_interference(grid_channels):
    scenario = Scenario(n_antennas=16, rho=0.5, snr_db=10.0)
    upper = evaluate_baseline(BaselineKind.NO_INTERFERENCE, grid_channels, scenario).mui_bits
    nulled = evaluate_baseline(BaselineKind.SVD_NULLING, grid_channels, scenario)
    assert not nulled.degenerate
    assert nulled.mui_bits == pytest.approx(upper, rel=1e-6)


def test_unknown_baseline_tag():
    with pytest.raises(ValueError):
        BaselineKind("proposed")
