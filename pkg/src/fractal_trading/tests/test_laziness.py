# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
import pytest

from src.fractal_trading.errors import DomainError
from src.fractal_trading.laziness import LazinessMode, LazinessSpec, dyadic_level


def test_constant_laziness_ignores_level():
    spec = LazinessSpec.constant(0.25)
    assert [spec.at_level(m) for m in range(4)] == [0.25] * 4
    assert spec.is_constant
    assert not spec.is_level_based


def test_power_of_two_level_adds_base():
    """L(m) = L0 + lambda * 2^(alpha*m)"""
    spec = LazinessSpec.power_of_two_level(0.5, 2.0, base_L0=1.0)
    assert spec.at_level(0) == 1.5
    assert spec.at_level(3) == 1.0 + 0.5 * 64.0
    assert spec.is_level_based


def test_power_of_trade_count_accepts_fractional_counts():
    spec = LazinessSpec.power_of_trade_count(0.1, 1.5)
    assert spec.for_trade_count(4.0) == pytest.approx(0.1 * 8.0)
    assert spec.for_trade_count(2.5) == pytest.approx(0.1 * 2.5**1.5)


def test_mode_accepts_plain_strings():
    mode = "power-of-trade-count"
    spec = LazinessSpec(scale_lambda=1.0, mode=mode)  # type: ignore[arg-type]
    assert spec.mode is LazinessMode.POWER_OF_TRADE_COUNT


@pytest.mark.parametrize(
    "kwargs",
    [
        {"base_L0": -1.0},
        {"scale_lambda": -0.1},
        {"exponent_alpha": 0.5},
    ],
)
def test_invalid_parameters_raise_domain_error(kwargs: dict[str, float]):
    with pytest.raises(DomainError):
        LazinessSpec(**kwargs)


def test_domain_error_is_a_value_error():
    with pytest.raises(ValueError):
        LazinessSpec(base_L0=-1.0)


def test_as_trade_count_drops_base():
    spec = LazinessSpec.power_of_two_level(0.5, 1.4, base_L0=3.0).as_trade_count()
    assert spec.mode is LazinessMode.POWER_OF_TRADE_COUNT
    assert spec.base_L0 == 0.0
    assert spec.for_trade_count(8.0) == pytest.approx(0.5 * 8.0**1.4)


def test_as_trade_count_of_constant_is_free():
    spec = LazinessSpec.constant(2.0).as_trade_count()
    assert spec.for_trade_count(1024.0) == 0.0


def test_dyadic_level():
    assert dyadic_level(1.0) == 0
    assert dyadic_level(8.0) == 3
    assert dyadic_level(2.0**20 * (1 + 1e-12)) == 20


@pytest.mark.parametrize("n_trades", [6.0, 0.5, 0.0, -4.0])
def test_dyadic_level_rejects_non_powers(n_trades: float):
    with pytest.raises(DomainError):
        dyadic_level(n_trades)
