# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Deterministic fractal profit model on the dyadic grid.

At level m the horizon T is cut into n = 2^m intervals of length T/2^m. Each chord
T/2^m is the hypotenuse of a right triangle whose legs are the exploitable mean
move Phi_m and the microstructure term W^m*c0:

    (T/2^m)^2 = Phi_m^2 + W^(2m) * c0^2

Total profit at level m is R_m = 2^m * (Phi_m - s) - L(m).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from src.fractal_trading.errors import (
    DomainError,
    InfeasibleLevelError,
    NumericalError,
)
from src.fractal_trading.laziness import LazinessSpec

logger = logging.getLogger(__name__)

DEFAULT_M_CAP = 30
M_CAP_MAX = 1000


@dataclass(frozen=True)
class DeterministicParams:
    horizon_T: float
    roughness_W: float
    micro_c0: float
    spread_s: float = 0.0
    laziness: LazinessSpec = field(default_factory=LazinessSpec)
    m_cap: int = DEFAULT_M_CAP

    def __post_init__(self):
        if not self.horizon_T > 0:
            raise DomainError(f"horizon_T must be > 0, got {self.horizon_T!r}")
        if not self.roughness_W > 0:
            raise DomainError(f"roughness_W must be > 0, got {self.roughness_W!r}")
        # c0 = 0 is allowed: it is the pure-chord limit without microstructure
        if not self.micro_c0 >= 0:
            raise DomainError(f"micro_c0 must be >= 0, got {self.micro_c0!r}")
        if not self.spread_s >= 0:
            raise DomainError(f"spread_s must be >= 0, got {self.spread_s!r}")
        if not 0 <= self.m_cap <= M_CAP_MAX:
            raise DomainError(
                f"m_cap must lie in [0, {M_CAP_MAX}], got {self.m_cap!r}"
            )


@dataclass(frozen=True)
class LevelBound:
    """Largest feasible level; capped means feasibility never failed below m_cap."""

    m_max: int
    capped: bool = False


@dataclass(frozen=True)
class ProfitCurve:
    levels: tuple[int, ...]
    profits: tuple[float, ...]
    m_max: int
    m_star: int | None
    capped: bool = False
    non_unimodal: bool = False
    certified: bool = False
    gross: tuple[float, ...] = ()
    friction: tuple[float, ...] = ()
    laziness: tuple[float, ...] = ()

    def __post_init__(self):
        assert len(self.levels) == len(self.profits), (
            "levels and profits must have equal length"
        )
        assert all(b - a == 1 for a, b in zip(self.levels, self.levels[1:])), (
            f"levels must be consecutive integers, got {self.levels}"
        )
        assert (self.m_star is None) == (not self.levels), (
            "m_star is present iff levels are nonempty"
        )

    @classmethod
    def from_profits(
        cls,
        levels: Sequence[int],
        profits: Sequence[float],
        **extra: object,
    ) -> ProfitCurve:
        """Curve whose m_star is the exhaustive argmax, smallest level on ties."""
        levels = tuple(int(m) for m in levels)
        profits = tuple(float(r) for r in profits)
        m_star = None
        if levels:
            best = max(range(len(profits)), key=lambda i: (profits[i], -i))
            m_star = levels[best]
        return cls(
            levels=levels,
            profits=profits,
            m_max=levels[-1] if levels else -1,
            m_star=m_star,
            **extra,  # type: ignore[arg-type]
        )

    def profit_at(self, m: int) -> float:
        return self.profits[m - self.levels[0]]

    @property
    def has_interior_maximum(self) -> bool:
        return self.m_star is not None and self.levels[0] < self.m_star < self.m_max


@dataclass(frozen=True)
class MarginalTerms:
    """Parts of the forward difference; net = gross_gain - friction - laziness."""

    gross_gain: float
    friction: float
    laziness: float
    net: float


@dataclass(frozen=True)
class DeterministicStatics:
    dR_ds: float
    dR_dc0: float
    dR_dW: float


def _chord(m: int, p: DeterministicParams) -> tuple[float, float]:
    return p.horizon_T / 2.0**m, p.roughness_W**m * p.micro_c0


def is_feasible(m: int, p: DeterministicParams) -> bool:
    """Strict: T/2^m == W^m*c0 leaves no exploitable move and counts as infeasible."""
    if m < 0:
        return False
    lhs, rhs = _chord(m, p)
    return lhs > rhs


def phi(m: int, p: DeterministicParams) -> float:
    """Exploitable mean move at level m."""
    if m < 0:
        raise DomainError(f"level m must be >= 0, got {m}")
    lhs, rhs = _chord(m, p)
    if not lhs > rhs:
        raise InfeasibleLevelError(m, lhs, rhs)
    # (a-b)(a+b) keeps precision when both legs are close
    return math.sqrt((lhs - rhs) * (lhs + rhs))


def feasible_m_max(p: DeterministicParams) -> LevelBound | None:
    """
    Largest m with T/2^m > W^m*c0, by linear scan.

    Returns None when not even m=0 is feasible (c0 >= T). When W <= 1/2 every level
    is feasible; the scan then stops at p.m_cap and the bound is flagged capped.
    """
    if not is_feasible(0, p):
        return None
    m = 0
    while m < p.m_cap and is_feasible(m + 1, p):
        m += 1
    capped = m == p.m_cap and is_feasible(m + 1, p)
    if capped:
        logger.debug(f"feasible set is unbounded, scan capped at m_cap={p.m_cap}")
    return LevelBound(m_max=m, capped=capped)


def profit_deterministic(m: int, p: DeterministicParams) -> float:
    return 2.0**m * (phi(m, p) - p.spread_s) - p.laziness.at_level(m)


def marginal_decomposition(m: int, p: DeterministicParams) -> MarginalTerms:
    """
    Split the move from level m to m+1 (doubling the trade count) into the gross
    marginal benefit 2^m(2*Phi_{m+1} - Phi_m), the marginal execution friction 2^m*s
    and the incremental laziness L(m+1) - L(m).
    """
    scale = 2.0**m
    gross_gain = scale * (2.0 * phi(m + 1, p) - phi(m, p))
    friction = scale * p.spread_s
    laziness = p.laziness.at_level(m + 1) - p.laziness.at_level(m)
    return MarginalTerms(
        gross_gain=gross_gain,
        friction=friction,
        laziness=laziness,
        net=gross_gain - friction - laziness,
    )


def forward_difference(m: int, p: DeterministicParams) -> float:
    """Delta R_m = R_{m+1} - R_m, evaluated without subtracting the two profits."""
    return marginal_decomposition(m, p).net


def concavity_premise_holds(p: DeterministicParams, m_max: int | None = None) -> bool:
    """Discrete strict concavity of A_m = 2^m * Phi_m over 0..m_max."""
    if m_max is None:
        bound = feasible_m_max(p)
        if bound is None:
            return False
        m_max = bound.m_max
    a = [2.0**m * phi(m, p) for m in range(m_max + 1)]
    return all(a[m + 2] - 2.0 * a[m + 1] + a[m] < 0 for m in range(len(a) - 2))


def verify_uniqueness(deltas: Sequence[float], m_star: int) -> bool:
    """
    Certificate for a stopping-rule optimum: Delta R_{m*-1} > 0 (if m* > 0) and
    Delta R_{m*} <= 0 (if m* < m_max), where deltas[m] = Delta R_m for m < m_max.
    """
    if m_star > 0 and not deltas[m_star - 1] > 0:
        return False
    return not (m_star < len(deltas) and not deltas[m_star] <= 0)


def _first_nonpositive(deltas: Sequence[float], m_max: int) -> int:
    for m, d in enumerate(deltas):
        if d <= 0:
            return m
    return m_max


def optimize_deterministic(p: DeterministicParams) -> ProfitCurve:
    """
    Evaluate R_m on 0..m_max and pick the optimum by the marginal stopping rule.

    The stopping rule is only valid when Delta R_m is nonincreasing. That premise is
    checked on the computed sequence; if it fails the optimum is the exhaustive argmax
    and the curve is flagged non_unimodal.
    """
    try:
        return _evaluate_curve(p)
    except OverflowError as e:
        raise NumericalError(
            f"profit curve leaves the float range below m_cap={p.m_cap}: {e}"
        ) from e


def _evaluate_curve(p: DeterministicParams) -> ProfitCurve:
    bound = feasible_m_max(p)
    if bound is None:
        lhs, rhs = _chord(0, p)
        raise InfeasibleLevelError(0, lhs, rhs)

    levels = range(bound.m_max + 1)
    gross = [2.0**m * phi(m, p) for m in levels]
    friction = [2.0**m * p.spread_s for m in levels]
    laziness = [p.laziness.at_level(m) for m in levels]
    profits = [g - f - lz for g, f, lz in zip(gross, friction, laziness)]
    deltas = [forward_difference(m, p) for m in range(bound.m_max)]

    monotone = all(b <= a for a, b in zip(deltas, deltas[1:]))
    if monotone:
        m_star = _first_nonpositive(deltas, bound.m_max)
    else:
        m_star = max(levels, key=lambda m: (profits[m], -m))
        logger.warning(
            f"Delta R_m is not monotone on 0..{bound.m_max}; "
            f"falling back to exhaustive argmax m*={m_star}"
        )

    return ProfitCurve(
        levels=tuple(levels),
        profits=tuple(profits),
        m_max=bound.m_max,
        m_star=m_star,
        capped=bound.capped,
        non_unimodal=not monotone,
        certified=verify_uniqueness(deltas, m_star),
        gross=tuple(gross),
        friction=tuple(friction),
        laziness=tuple(laziness),
    )


def statics_deterministic(m: int, p: DeterministicParams) -> DeterministicStatics:
    """
    Closed-form partials of R_m.

    dR/dW carries the factor m from d(W^(2m))/dW, so it vanishes at m = 0.
    """
    phi_m = phi(m, p)
    scale = 2.0**m
    w, c0 = p.roughness_W, p.micro_c0
    return DeterministicStatics(
        dR_ds=-scale,
        dR_dc0=-scale * w ** (2 * m) * c0 / phi_m,
        dR_dW=-scale * m * w ** (2 * m - 1) * c0**2 / phi_m,
    )
