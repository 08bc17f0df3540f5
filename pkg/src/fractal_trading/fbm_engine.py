# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Fractional Brownian motion sample paths.

Two samplers of unit fractional Gaussian noise (fGN) are provided:

cholesky   exact; factorizes the n x n Toeplitz covariance, O(n^2) memory.
circulant  Davies-Harte; embeds the autocovariance in a circulant matrix of size
           2n whose eigenvalues come from one FFT, O(n log n).

The noise is scaled to the grid step and summed into a path
X_t = mu*t + sigma*B^H_t starting at 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache

import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.fractal_trading.errors import (
    CapabilityError,
    DomainError,
    EmbeddingError,
    FactorizationError,
)

logger = logging.getLogger(__name__)

CHOLESKY_MAX_STEPS = 4096
EIGENVALUE_TOLERANCE = 1e-9
SEED_MAX = 2**64 - 1

FloatArray = npt.NDArray[np.float64]


class SamplerMethod(StrEnum):
    CHOLESKY = "cholesky"
    CIRCULANT = "circulant"


def _check_hurst(H: float):
    if not 0 < H < 1:
        raise DomainError(f"Hurst exponent must lie in (0, 1), got {H!r}")


@dataclass(frozen=True)
class FbmConfig:
    hurst_H: float
    sigma: float = 1.0
    drift_mu: float = 0.0
    n_steps: int = 1024
    horizon_T: float = 1.0
    method: SamplerMethod = SamplerMethod.CIRCULANT
    seed: int = 0

    def __post_init__(self):
        _check_hurst(self.hurst_H)
        if not self.sigma > 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma!r}")
        if self.n_steps < 1:
            raise DomainError(f"n_steps must be >= 1, got {self.n_steps!r}")
        if not self.horizon_T > 0:
            raise DomainError(f"horizon_T must be > 0, got {self.horizon_T!r}")
        if not 0 <= self.seed <= SEED_MAX:
            raise DomainError(
                f"seed must be a 64-bit unsigned integer, got {self.seed}"
            )
        object.__setattr__(self, "method", SamplerMethod(self.method))

    @property
    def dt(self) -> float:
        return self.horizon_T / self.n_steps


@dataclass(frozen=True, eq=False)
class FbmPath:
    times: FloatArray
    values: FloatArray
    config: FbmConfig

    @property
    def increments(self) -> FloatArray:
        return np.diff(self.values)


def fbm_covariance(t: float, s: float, H: float) -> float:
    """Cov(B^H_t, B^H_s) = (t^2H + s^2H - |t-s|^2H) / 2."""
    _check_hurst(H)
    if t < 0 or s < 0:
        raise DomainError(f"times must be >= 0, got t={t!r}, s={s!r}")
    two_h = 2.0 * H
    return 0.5 * (t**two_h + s**two_h - abs(t - s) ** two_h)


def fgn_autocovariance(k: int | npt.ArrayLike, H: float) -> FloatArray | float:
    """Autocovariance of unit-spaced fBM increments at lag k."""
    _check_hurst(H)
    lag = np.abs(np.asarray(k, dtype=np.float64))
    two_h = 2.0 * H
    gamma = 0.5 * (
        np.abs(lag + 1.0) ** two_h - 2.0 * lag**two_h + np.abs(lag - 1.0) ** two_h
    )
    if gamma.ndim == 0:
        return float(gamma)
    return gamma


def make_generator(seed: int) -> np.random.Generator:
    """The one generator used for all sampling (PCG64)."""
    return np.random.Generator(np.random.PCG64(seed))


@lru_cache(maxsize=32)
def circulant_eigenvalues(n_steps: int, H: float) -> FloatArray:
    """
    Eigenvalues of the size-2n circulant embedding of the fGN autocovariance.

    First row: gamma(0), ..., gamma(n-1), gamma(n), gamma(n-1), ..., gamma(1).
    Values in [-EIGENVALUE_TOLERANCE, 0) are clamped to 0.
    """
    gamma = fgn_autocovariance(np.arange(n_steps + 1), H)
    assert isinstance(gamma, np.ndarray)
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    eigenvalues = np.fft.fft(row).real
    smallest = float(eigenvalues.min())
    if smallest < -EIGENVALUE_TOLERANCE:
        raise EmbeddingError(smallest, n_steps, H)
    if smallest < 0:
        logger.debug(f"clamping circulant eigenvalues down to {smallest!r} to 0")
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    eigenvalues.setflags(write=False)
    return eigenvalues


@lru_cache(maxsize=4)
def _cholesky_factor(n_steps: int, H: float) -> FloatArray:
    gamma = fgn_autocovariance(np.arange(n_steps), H)
    covariance = scipy.linalg.toeplitz(gamma)
    try:
        factor = scipy.linalg.cholesky(covariance, lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise FactorizationError(
            f"Cholesky factorization of the {n_steps}x{n_steps} fGN covariance for "
            f"H={H} failed ({e}); add diagonal jitter or use the circulant method"
        ) from e
    factor.setflags(write=False)
    return factor


def sample_fgn(
    n_steps: int,
    H: float,
    method: SamplerMethod,
    rng: np.random.Generator,
    cholesky_max_steps: int = CHOLESKY_MAX_STEPS,
) -> FloatArray:
    """n_steps of unit fractional Gaussian noise (variance 1 per step)."""
    _check_hurst(H)
    match SamplerMethod(method):
        case SamplerMethod.CHOLESKY:
            if n_steps > cholesky_max_steps:
                raise CapabilityError(
                    f"cholesky sampler is limited to {cholesky_max_steps} steps "
                    f"(requested {n_steps}); use method=circulant"
                )
            return _cholesky_factor(n_steps, H) @ rng.standard_normal(n_steps)
        case SamplerMethod.CIRCULANT:
            eigenvalues = circulant_eigenvalues(n_steps, H)
            size = eigenvalues.size
            xi = rng.standard_normal(size) + 1j * rng.standard_normal(size)
            # Re(FFT(sqrt(lambda/2n) * xi)) has exactly the embedded covariance
            return np.fft.fft(np.sqrt(eigenvalues / size) * xi).real[:n_steps]


def sample_path(
    cfg: FbmConfig, cholesky_max_steps: int = CHOLESKY_MAX_STEPS
) -> FbmPath:
    rng = make_generator(cfg.seed)
    noise = sample_fgn(cfg.n_steps, cfg.hurst_H, cfg.method, rng, cholesky_max_steps)
    times = np.arange(cfg.n_steps + 1, dtype=np.float64) * cfg.horizon_T / cfg.n_steps
    values = np.empty(cfg.n_steps + 1, dtype=np.float64)
    values[0] = 0.0
    np.cumsum(cfg.sigma * cfg.dt**cfg.hurst_H * noise, out=values[1:])
    if cfg.drift_mu:
        values += cfg.drift_mu * times
    return FbmPath(times=times, values=values, config=cfg)
