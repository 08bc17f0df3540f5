# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
import numpy as np
import pytest

from src.fractal_trading.errors import DomainError, EstimationError
from src.fractal_trading.hurst import (
    PricePath,
    default_level_count,
    fit_scaling,
    mean_abs_increment,
    resample_uniform,
)


@pytest.fixture
def random_walk() -> PricePath:
    rng = np.random.default_rng(42)
    return PricePath.uniform(np.cumsum(rng.standard_normal(2**14)))


class TestFitScaling:
    def test_linear_series_is_smooth(self):
        fit = fit_scaling(PricePath.uniform(np.arange(65.0)))
        assert fit.H_hat == pytest.approx(1.0)
        assert fit.kappa_hat == pytest.approx(1.0)
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.levels_used == (0, 1, 2, 3)
        assert fit.mean_abs_increments == pytest.approx((1.0, 2.0, 4.0, 8.0))
        np.testing.assert_allclose(fit.residuals, 0.0, atol=1e-12)

    def test_sampling_interval_rescales_kappa(self):
        """Increments of size k at lag k*0.5 read as kappa = 2"""
        fit = fit_scaling(PricePath.uniform(np.arange(65.0), delta_t=0.5))
        assert fit.H_hat == pytest.approx(1.0)
        assert fit.kappa_hat == pytest.approx(2.0)
        assert fit.delta_t == 0.5

    def test_random_walk_is_brownian(self, random_walk: PricePath):
        fit = fit_scaling(random_walk)
        assert fit.H_hat == pytest.approx(0.5, abs=0.05)
        assert fit.kappa_hat == pytest.approx(np.sqrt(2 / np.pi), rel=0.1)
        assert len(fit.levels_used) == 8
        assert fit.r_squared > 0.99

    def test_fractal_dimension(self, random_walk: PricePath):
        fit = fit_scaling(random_walk)
        assert fit.fractal_dimension == 2.0 - fit.H_hat

    def test_level_shift_does_not_change_the_fit(self, random_walk: PricePath):
        assert fit_scaling(random_walk.shifted(4.6)).H_hat == pytest.approx(
            fit_scaling(random_walk).H_hat, rel=1e-9
        )

    @pytest.mark.parametrize("c", [0.01, 3.7, 250.0])
    def test_scaling_the_series_scales_kappa(self, random_walk: PricePath, c: float):
        fit = fit_scaling(random_walk)
        scaled = fit_scaling(PricePath.uniform(c * random_walk.log_prices))
        assert scaled.kappa_hat == pytest.approx(c * fit.kappa_hat, rel=1e-10)
        assert scaled.H_hat == pytest.approx(fit.H_hat, abs=1e-10)

    def test_longer_prefixes_fit_at_least_as_many_levels(self, random_walk: PricePath):
        used = [
            len(fit_scaling(PricePath.uniform(random_walk.log_prices[:n])).levels_used)
            for n in (33, 65, 100, 300, 1000, 2**12, 2**14)
        ]
        assert used[0] == 3
        assert used == sorted(used)
        assert used[-1] == 8

    def test_constant_series_is_degenerate(self):
        with pytest.raises(EstimationError, match="levels"):
            fit_scaling(PricePath.uniform(np.full(100, 4.2)))

    def test_short_series(self):
        with pytest.raises(DomainError):
            fit_scaling(PricePath.uniform(np.arange(20.0)))

    def test_too_many_levels_for_the_series(self):
        with pytest.raises(DomainError, match="too short"):
            fit_scaling(PricePath.uniform(np.arange(65.0)), m_levels=5)


def test_default_level_count():
    """64 increments keep >= 8 windows up to lag 8, so four levels"""
    assert default_level_count(PricePath.uniform(np.arange(65.0))) == 4
    assert default_level_count(PricePath.uniform(np.arange(100_000.0))) == 8


def test_default_level_count_grows_with_the_series():
    counts = [
        default_level_count(PricePath.uniform(np.arange(n + 1.0)))
        for n in range(8, 3000, 37)
    ]
    assert counts == sorted(counts)


def test_mean_abs_increment_uses_disjoint_windows():
    path = PricePath.uniform([0.0, 1.0, 0.0, 2.0, 0.0])
    assert mean_abs_increment(path, 1) == pytest.approx(1.5)
    assert mean_abs_increment(path, 2) == 0.0


@pytest.mark.parametrize("k", [0, 3])
def test_mean_abs_increment_lag_bounds(k: int):
    with pytest.raises(DomainError):
        mean_abs_increment(PricePath.uniform(np.arange(5.0)), k)


def test_resample_carries_last_observation_forward():
    grid, values, step = resample_uniform(
        [0.0, 1.0, 3.0, 4.0], [10.0, 11.0, 13.0, 14.0]
    )
    assert step == 2.0
    np.testing.assert_array_equal(grid, [0.0, 2.0, 4.0])
    np.testing.assert_array_equal(values, [10.0, 11.0, 14.0])


def test_resample_needs_two_points():
    with pytest.raises(DomainError):
        resample_uniform([0.0], [1.0])


class TestPricePath:
    def test_uniform_grid(self):
        path = PricePath.uniform([1.0, 2.0, 3.0], delta_t=0.25)
        np.testing.assert_array_equal(path.times, [0.0, 0.25, 0.5])
        assert len(path) == 3
        assert path.n_increments == 2

    @pytest.mark.parametrize(
        "times, log_prices, delta_t",
        [
            ([0.0, 1.0], [1.0], 1.0),
            ([0.0], [1.0], 1.0),
            ([0.0, 1.0], [1.0, 2.0], 0.0),
            ([0.0, 1.0], [1.0, np.nan], 1.0),
            ([1.0, 0.0], [1.0, 2.0], 1.0),
            ([0.0, 1.0, 3.0], [1.0, 2.0, 3.0], 1.0),
        ],
    )
    def test_invalid_paths(
        self, times: list[float], log_prices: list[float], delta_t: float
    ):
        with pytest.raises(DomainError):
            PricePath(np.array(times), np.array(log_prices), delta_t)

    def test_irregular_spacing_points_to_resampling(self):
        with pytest.raises(DomainError, match="resample"):
            PricePath(np.array([0.0, 1.0, 3.0]), np.array([1.0, 2.0, 3.0]), 1.0)
