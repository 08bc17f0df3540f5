# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""Laziness (non-execution) cost specifications shared by both profit models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum

from src.fractal_trading.errors import DomainError


class LazinessMode(StrEnum):
    CONSTANT = "constant"
    POWER_OF_TWO_LEVEL = "power-of-two-level"
    POWER_OF_TRADE_COUNT = "power-of-trade-count"


@dataclass(frozen=True)
class LazinessSpec:
    base_L0: float = 0.0
    scale_lambda: float = 0.0
    exponent_alpha: float = 1.0
    mode: LazinessMode = LazinessMode.CONSTANT

    def __post_init__(self):
        if not self.base_L0 >= 0:
            raise DomainError(f"base_L0 must be >= 0, got {self.base_L0!r}")
        if not self.scale_lambda >= 0:
            raise DomainError(f"scale_lambda must be >= 0, got {self.scale_lambda!r}")
        if not self.exponent_alpha >= 1:
            raise DomainError(
                f"exponent_alpha must be >= 1, got {self.exponent_alpha!r}"
            )
        # Accept plain strings from config files and CLI flags
        object.__setattr__(self, "mode", LazinessMode(self.mode))

    @classmethod
    def constant(cls, base_L0: float = 0.0) -> LazinessSpec:
        return cls(base_L0=base_L0)

    @classmethod
    def power_of_two_level(
        cls, scale_lambda: float, exponent_alpha: float, base_L0: float = 0.0
    ) -> LazinessSpec:
        return cls(
            base_L0, scale_lambda, exponent_alpha, LazinessMode.POWER_OF_TWO_LEVEL
        )

    @classmethod
    def power_of_trade_count(
        cls, scale_lambda: float, exponent_alpha: float
    ) -> LazinessSpec:
        return cls(0.0, scale_lambda, exponent_alpha, LazinessMode.POWER_OF_TRADE_COUNT)

    @property
    def is_constant(self) -> bool:
        return self.mode is LazinessMode.CONSTANT

    @property
    def is_level_based(self) -> bool:
        return self.mode is LazinessMode.POWER_OF_TWO_LEVEL

    def at_level(self, m: int) -> float:
        """L(m) on the dyadic grid, where the trade count is n = 2^m."""
        return self.for_trade_count(2.0**m)

    def for_trade_count(self, n: float) -> float:
        """
        L as a function of the (possibly fractional) trade count n = T/Δ.

        constant:              L0
        power-of-two-level:    L0 + λ·2^(α·m) = L0 + λ·n^α
        power-of-trade-count:  λ·n^α
        """
        match self.mode:
            case LazinessMode.CONSTANT:
                return self.base_L0
            case LazinessMode.POWER_OF_TWO_LEVEL:
                return self.base_L0 + self.scale_lambda * n**self.exponent_alpha
            case LazinessMode.POWER_OF_TRADE_COUNT:
                return self.scale_lambda * n**self.exponent_alpha

    def as_trade_count(self) -> LazinessSpec:
        """
        Same marginal cost expressed in power-of-trade-count mode.

        L0 is dropped: it shifts the profit level but never the optimum.
        """
        if self.is_constant:
            return LazinessSpec.power_of_trade_count(0.0, 1.0)
        return LazinessSpec.power_of_trade_count(self.scale_lambda, self.exponent_alpha)


def dyadic_level(n_trades: float, rel_tol: float = 1e-9) -> int:
    """Return m when n_trades == 2^m (within rel_tol), else raise."""
    if n_trades <= 0:
        raise DomainError(f"trade count must be positive, got {n_trades!r}")
    m = round(math.log2(n_trades))
    if m < 0 or abs(2.0**m - n_trades) > rel_tol * n_trades:
        raise DomainError(
            f"level-based laziness needs a dyadic interval, T/delta = {n_trades!r} "
            "is not a power of two"
        )
    return m
