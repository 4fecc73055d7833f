"""
Complex-matrix primitives shared by the channel, metric and selection modules.

Everything here is a pure function of its inputs and is safe to call from
concurrent workers.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import scipy.linalg

from jrcbeam.exceptions import (
    DomainError,
    InvalidArgumentError,
    InvalidDimensionError,
)
from jrcbeam.helpers import LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)

RANK_TOLERANCE = 1e-8
PSD_TOLERANCE = 1e-9

ChannelComponent = Literal["comms", "radar", "total"]


@dataclass(frozen=True)
class CovarianceSet:
    """
    Second-order channel statistics.

    Attributes:
        r (np.ndarray): Covariance of the combined channel H = H_C + H_R.
        r_c (np.ndarray): Covariance of the communications channel, E{H_C^H H_C}.
        r_r (np.ndarray): Covariance of the radar channel, E{H_R^H H_R}.
    """

    r: np.ndarray
    r_c: np.ndarray
    r_r: np.ndarray

    @property
    def dim(self) -> int:
        return self.r.shape[0]


def dft_matrix(n: int) -> np.ndarray:
    """
    Builds the unnormalized DFT codebook F with F[m, k] = exp(-j 2 pi m k / n).

    Args:
        n (int): Codebook size (number of antennas).

    Returns:
        np.ndarray: The n x n codebook. F F^H = n I.

    Raises:
        InvalidDimensionError: If n < 1.
    """
    if n < 1:
        raise InvalidDimensionError(f"DFT size must be >= 1, got {n}")
    index = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(index, index) / n)


def hermitian_part(x: np.ndarray) -> np.ndarray:
    """Returns (x + x^H) / 2, the nearest Hermitian matrix."""
    return 0.5 * (x + x.conj().T)


def is_psd(matrix: np.ndarray, tol: float = PSD_TOLERANCE) -> bool:
    """
    Checks positive semi-definiteness relative to the largest eigenvalue magnitude.

    Args:
        matrix (np.ndarray): Square matrix; only its Hermitian part is inspected.
        tol (float): Relative tolerance for negative eigenvalues.

    Returns:
        bool: True if every eigenvalue is >= -tol * max|eigenvalue|.
    """
    if matrix.size == 0:
        return True
    eigenvalues = np.linalg.eigvalsh(hermitian_part(matrix))
    scale = max(np.max(np.abs(eigenvalues)), np.finfo(float).tiny)
    return bool(eigenvalues.min() >= -tol * scale)


def psd_sqrt(sigma: np.ndarray, tol: float = PSD_TOLERANCE) -> np.ndarray:
    """
    Principal square root of a PSD matrix.

    Args:
        sigma (np.ndarray): Hermitian PSD matrix.
        tol (float): Relative tolerance below which negative eigenvalues are clipped.

    Returns:
        np.ndarray: S with S = S^H and S S = sigma.

    Raises:
        DomainError: If sigma has an eigenvalue below -tol * max|eigenvalue|.
    """
    if not is_psd(sigma, tol):
        raise DomainError("matrix square root requested for a non-PSD matrix")
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian_part(sigma))
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def nullspace_basis(a: np.ndarray, tol: float = RANK_TOLERANCE) -> np.ndarray:
    """
    Orthonormal basis of {x : a x = 0}.

    Singular values below tol * sigma_max count as zero. A full column rank input
    yields a matrix with zero columns rather than an error.

    Args:
        a (np.ndarray): Nonempty (m x n) matrix.
        tol (float): Relative rank tolerance.

    Returns:
        np.ndarray: (n x k) matrix with orthonormal columns, k = n - rank(a).
    """
    if a.ndim != 2 or a.size == 0:
        raise InvalidDimensionError(f"nullspace needs a nonempty matrix, got {a.shape}")
    if tol <= 0:
        raise InvalidArgumentError(f"rank tolerance must be positive, got {tol}")
    # an all-zero matrix has sigma_max = 0; scipy then keeps the full space
    return scipy.linalg.null_space(a, rcond=tol)


def logdet_cap(
    h: np.ndarray,
    sigma: np.ndarray,
    noise_power: float,
    tol: float = PSD_TOLERANCE,
) -> float:
    """
    Capacity term log2 det(I + (1 / noise_power) h sigma h^H).

    Evaluated from the eigenvalues of the Hermitian matrix h sigma h^H, which stays
    stable at high SNR where the plain determinant overflows.

    Args:
        h (np.ndarray): Channel matrix (m x n).
        sigma (np.ndarray): Transmit covariance (n x n), PSD.
        noise_power (float): Noise variance, > 0.
        tol (float): Relative PSD tolerance for sigma.

    Returns:
        float: The capacity in bits, >= 0.

    Raises:
        InvalidArgumentError: If noise_power <= 0.
        InvalidDimensionError: If h and sigma are not conformal.
        DomainError: If sigma is not PSD.
    """
    if noise_power <= 0:
        raise InvalidArgumentError(f"noise power must be positive, got {noise_power}")
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or h.shape[1] != sigma.shape[0]:
        raise InvalidDimensionError(
            f"non-conformal capacity inputs: h {h.shape}, sigma {sigma.shape}"
        )
    if not is_psd(sigma, tol):
        raise DomainError("transmit covariance is not positive semi-definite")

    gram = hermitian_part(h @ sigma @ h.conj().T)
    eigenvalues = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    return float(np.sum(np.log2(1.0 + eigenvalues / noise_power)))


def sample_covariance(draws: Sequence, which: ChannelComponent = "total") -> np.ndarray:
    """
    Monte-Carlo estimate (1/M) sum_m H_m^H H_m over channel draws.

    Args:
        draws (Sequence[ChannelSet]): At least one channel realization.
        which (str): Component to average: "comms" (h_c), "radar" (h_r) or "total" (h).

    Returns:
        np.ndarray: Hermitian PSD estimate.

    Raises:
        InvalidArgumentError: On an empty sequence or an unknown component.
        InvalidDimensionError: If the draws do not share one dimension.
    """
    attribute = {"comms": "h_c", "radar": "h_r", "total": "h"}.get(which)
    if attribute is None:
        raise InvalidArgumentError(f"unknown channel component '{which}'")
    if len(draws) == 0:
        raise InvalidArgumentError("covariance estimate needs at least one draw")

    matrices = [getattr(draw, attribute) for draw in draws]
    shape = matrices[0].shape
    if any(m.shape != shape for m in matrices):
        raise InvalidDimensionError("channel draws have different dimensions")

    stack = np.stack(matrices)
    estimate = np.einsum("mki,mkj->ij", stack.conj(), stack) / len(matrices)
    return hermitian_part(estimate)
