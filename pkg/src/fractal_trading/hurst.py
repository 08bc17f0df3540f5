# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Estimation of (H, kappa) from a log-price series.

For dyadic lags k = 1, 2, 4, ... the mean absolute increment over non-overlapping
windows is regressed on the lag length in log-log space:

    log E|dx|_k = log kappa + H * log(k * dt)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from src.fractal_trading.errors import DomainError, EstimationError

logger = logging.getLogger(__name__)

MIN_INCREMENTS_PER_LEVEL = 8
MAX_DEFAULT_LEVELS = 8
MIN_LEVELS = 3
UNIFORM_SPACING_RTOL = 1e-9

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class PricePath:
    times: FloatArray
    log_prices: FloatArray
    delta_t: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        log_prices = np.asarray(self.log_prices, dtype=np.float64)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "log_prices", log_prices)
        if times.ndim != 1 or times.shape != log_prices.shape:
            raise DomainError(
                f"times and log_prices must be 1-d of equal length, got "
                f"{times.shape} and {log_prices.shape}"
            )
        if times.size < 2:
            raise DomainError(f"a price path needs >= 2 points, got {times.size}")
        if not self.delta_t > 0:
            raise DomainError(f"delta_t must be > 0, got {self.delta_t!r}")
        if not np.all(np.isfinite(log_prices)):
            raise DomainError("log_prices contain non-finite values")
        steps = np.diff(times)
        if not np.all(steps > 0):
            raise DomainError("times must be strictly increasing")
        if not np.allclose(steps, self.delta_t, rtol=UNIFORM_SPACING_RTOL, atol=0.0):
            raise DomainError(
                f"times are not uniformly spaced at delta_t={self.delta_t!r} "
                f"(spacing ranges {steps.min()!r}..{steps.max()!r}); "
                "resample to a uniform grid first"
            )

    @classmethod
    def uniform(cls, log_prices: npt.ArrayLike, delta_t: float = 1.0) -> PricePath:
        values = np.asarray(log_prices, dtype=np.float64)
        return cls(np.arange(values.size) * delta_t, values, delta_t)

    def __len__(self) -> int:
        return int(self.log_prices.size)

    @property
    def n_increments(self) -> int:
        return len(self) - 1

    def shifted(self, offset: float) -> PricePath:
        return PricePath(self.times, self.log_prices + offset, self.delta_t)


@dataclass(frozen=True, eq=False)
class HurstFit:
    H_hat: float
    kappa_hat: float
    levels_used: tuple[int, ...]
    mean_abs_increments: tuple[float, ...]
    r_squared: float
    residuals: tuple[float, ...]
    intercept: float
    delta_t: float
    fractal_dimension: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "fractal_dimension", 2.0 - self.H_hat)


def resample_uniform(
    times: npt.ArrayLike, values: npt.ArrayLike
) -> tuple[FloatArray, FloatArray, float]:
    """
    Resample onto the coarsest uniform grid (step = largest observed spacing),
    carrying the last observation forward. Returns (times, values, step).
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.size < 2:
        raise DomainError(f"need >= 2 observations to resample, got {t.size}")
    step = float(np.diff(t).max())
    slack = UNIFORM_SPACING_RTOL * step
    n_points = int(np.floor((t[-1] - t[0] + slack) / step)) + 1
    grid = t[0] + step * np.arange(n_points)
    idx = np.searchsorted(t, grid + slack, side="right") - 1
    logger.debug(f"resampled {t.size} observations onto {n_points} points, step {step}")
    return grid, v[np.clip(idx, 0, t.size - 1)], step


def mean_abs_increment(path: PricePath, k: int) -> float:
    """Mean |x_{t+k} - x_t| over non-overlapping windows t = 0, k, 2k, ..."""
    if k < 1:
        raise DomainError(f"lag k must be >= 1, got {k}")
    if k > path.n_increments // 2:
        raise DomainError(
            f"lag k={k} leaves fewer than two increments in a path of "
            f"{len(path)} points"
        )
    return float(np.abs(np.diff(path.log_prices[::k])).mean())


def _increment_count(path: PricePath, k: int) -> int:
    return path.n_increments // k


def default_level_count(path: PricePath) -> int:
    """min(8, largest level count whose coarsest lag keeps >= 8 increments)."""
    levels = 0
    while _increment_count(path, 2**levels) >= MIN_INCREMENTS_PER_LEVEL:
        levels += 1
    return min(MAX_DEFAULT_LEVELS, levels)


def _ols(x: FloatArray, y: FloatArray) -> tuple[float, float, FloatArray, float]:
    design = np.vstack([np.ones_like(x), x]).T
    (intercept, slope), *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(residuals**2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(intercept), float(slope), residuals, min(max(r_squared, 0.0), 1.0)


def fit_scaling(path: PricePath, m_levels: int | None = None) -> HurstFit:
    """Unweighted OLS of log mean |increment| on log(k*dt), k = 2^m, m < m_levels."""
    if m_levels is None:
        m_levels = default_level_count(path)
    if m_levels < MIN_LEVELS:
        raise DomainError(
            f"need at least {MIN_LEVELS} dyadic levels, got {m_levels} "
            f"(path of {len(path)} points)"
        )
    coarsest = 2 ** (m_levels - 1)
    if _increment_count(path, coarsest) < MIN_INCREMENTS_PER_LEVEL:
        raise DomainError(
            f"path of {len(path)} points is too short for {m_levels} levels: lag "
            f"{coarsest} keeps {_increment_count(path, coarsest)} increments, "
            f"needs {MIN_INCREMENTS_PER_LEVEL}"
        )

    levels = tuple(range(m_levels))
    means = np.array([mean_abs_increment(path, 2**m) for m in levels])
    if not np.all(means > 0):
        zero_levels = [m for m, v in zip(levels, means) if not v > 0]
        raise EstimationError(
            f"degenerate series: zero mean absolute increment at levels {zero_levels}"
        )

    x = np.log(2.0 ** np.array(levels) * path.delta_t)
    intercept, slope, residuals, r_squared = _ols(x, np.log(means))
    logger.debug(f"scaling fit over {m_levels} levels: H={slope}, R^2={r_squared}")
    return HurstFit(
        H_hat=slope,
        kappa_hat=float(np.exp(intercept)),
        levels_used=levels,
        mean_abs_increments=tuple(float(v) for v in means),
        r_squared=r_squared,
        residuals=tuple(float(r) for r in residuals),
        intercept=intercept,
        delta_t=path.delta_t,
    )
