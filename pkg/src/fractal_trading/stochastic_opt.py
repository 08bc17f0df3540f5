# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Expected profit under fBM scaling and the optimal trading interval.

With E|dX| = kappa * delta^H, trading every delta over a horizon T earns

    R(delta) = kappa*T*delta^(H-1) - T*s/delta - L

The first-order condition kappa(1-H) delta^H = s gives the closed form
delta* = (s / (kappa(1-H)))^(1/H). With a power-law latency cost
L = lambda*(T/delta)^alpha the condition gains the term
lambda*alpha*T^(alpha-1)*delta^(1-alpha) and, for alpha > 1, is solved by a
safeguarded Newton iteration.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import scipy.optimize

from src.fractal_trading.errors import ContractError, ConvergenceError, DomainError
from src.fractal_trading.laziness import LazinessMode, LazinessSpec, dyadic_level

logger = logging.getLogger(__name__)

KAPPA_CONSTANT = math.sqrt(2.0 / math.pi)
NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-12
BRACKET_GROWTH = 4.0
BRACKET_MAX_STEPS = 400
BRENT_MAX_ITER = 400
BRENT_XTOL = 1e-300


@dataclass(frozen=True)
class StochasticParams:
    hurst_H: float
    kappa: float
    spread_s: float
    horizon_T: float = 1.0
    laziness: LazinessSpec = field(default_factory=LazinessSpec)

    def __post_init__(self):
        if not 0 < self.hurst_H < 1:
            raise DomainError(f"hurst_H must lie in (0, 1), got {self.hurst_H!r}")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be > 0, got {self.kappa!r}")
        if not self.spread_s > 0:
            raise DomainError(f"spread_s must be > 0, got {self.spread_s!r}")
        if not self.horizon_T > 0:
            raise DomainError(f"horizon_T must be > 0, got {self.horizon_T!r}")


@dataclass(frozen=True)
class OptimalInterval:
    delta_star: float
    n_star: float
    m_star_rounded: int
    foc_residual: float
    second_order_value: float
    method: str = "closed-form"
    iterations: int = 0


@dataclass(frozen=True)
class IntervalStatics:
    """Partials of delta* (d_dD is with respect to the fractal dimension D = 2 - H)."""

    d_ds: float
    d_dkappa: float
    d_dH: float
    d_dD: float


def hausdorff_dimension(H: float) -> float:
    return 2.0 - H


def kappa_from_sigma(sigma: float, H: float | None = None) -> float:
    """
    E|sigma * B^H_1| = sigma * sqrt(2/pi).

    Independent of H because B^H_1 ~ N(0, 1) for every H; H is accepted only
    for call-site symmetry and validated when given.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be > 0, got {sigma!r}")
    if H is not None and not 0 < H < 1:
        raise DomainError(f"H must lie in (0, 1), got {H!r}")
    return sigma * KAPPA_CONSTANT


def sigma_from_kappa(kappa: float) -> float:
    return kappa / KAPPA_CONSTANT


def _laziness(delta: float, p: StochasticParams) -> float:
    n = p.horizon_T / delta
    if p.laziness.mode is LazinessMode.POWER_OF_TWO_LEVEL:
        dyadic_level(n)
    return p.laziness.for_trade_count(n)


def expected_profit(delta: float, p: StochasticParams) -> float:
    if not delta > 0:
        raise DomainError(f"delta must be > 0, got {delta!r}")
    gross = p.kappa * p.horizon_T * delta ** (p.hurst_H - 1.0)
    return gross - p.horizon_T * p.spread_s / delta - _laziness(delta, p)


def _latency_terms(p: StochasticParams) -> tuple[float, float]:
    """(lambda_eff, alpha) of the trade-count power law, (0, 1) for constant cost."""
    if p.laziness.is_constant:
        return 0.0, 1.0
    return p.laziness.scale_lambda, p.laziness.exponent_alpha


def foc_residual(delta: float, p: StochasticParams) -> float:
    """
    g(delta) = kappa(1-H) delta^H - s - lambda*alpha*T^(alpha-1)*delta^(1-alpha).

    g is strictly increasing in delta and R'(delta) = -T * g(delta) / delta^2.
    """
    lam, alpha = _latency_terms(p)
    H = p.hurst_H
    g = p.kappa * (1.0 - H) * delta**H - p.spread_s
    if lam:
        g -= lam * alpha * p.horizon_T ** (alpha - 1.0) * delta ** (1.0 - alpha)
    return g


def _foc_slope(delta: float, p: StochasticParams) -> float:
    lam, alpha = _latency_terms(p)
    H = p.hurst_H
    slope = p.kappa * (1.0 - H) * H * delta ** (H - 1.0)
    if lam:
        slope += (
            lam * alpha * (alpha - 1.0) * p.horizon_T ** (alpha - 1.0) * delta**-alpha
        )
    return slope


def second_derivative_analytic(delta: float, p: StochasticParams) -> float:
    """R''(delta); at the cost-free optimum it equals kappa*T*delta^(H-3)*H(H-1)."""
    lam, alpha = _latency_terms(p)
    H, T = p.hurst_H, p.horizon_T
    value = (
        p.kappa * T * (H - 1.0) * (H - 2.0) * delta ** (H - 3.0)
        - 2.0 * T * p.spread_s / delta**3
    )
    if lam:
        value -= lam * alpha * (alpha + 1.0) * T**alpha * delta ** (-alpha - 2.0)
    return value


def second_derivative_numeric(delta: float, p: StochasticParams) -> float:
    """Central second difference of expected_profit with a relative step."""
    # level-based laziness only evaluates on the dyadic grid, use the smooth form
    if p.laziness.is_level_based:
        p = replace(p, laziness=p.laziness.as_trade_count())
    h = delta * 1e-3
    return (
        expected_profit(delta + h, p)
        - 2.0 * expected_profit(delta, p)
        + expected_profit(delta - h, p)
    ) / h**2


def round_to_level(delta: float, horizon_T: float) -> int:
    """Nearest dyadic level to log2(T/delta); exact halves go to the smaller m."""
    x = math.log2(horizon_T / delta)
    return math.ceil(x - 0.5)


def _interval(
    delta: float, p: StochasticParams, method: str, iterations: int = 0
) -> OptimalInterval:
    return OptimalInterval(
        delta_star=delta,
        n_star=p.horizon_T / delta,
        m_star_rounded=round_to_level(delta, p.horizon_T),
        foc_residual=foc_residual(delta, p),
        second_order_value=second_derivative_numeric(delta, p),
        method=method,
        iterations=iterations,
    )


def _closed_form(spread: float, kappa: float, H: float) -> float:
    return (spread / (kappa * (1.0 - H))) ** (1.0 / H)


def delta_star_closed_form(p: StochasticParams) -> OptimalInterval:
    if not p.laziness.is_constant:
        raise ContractError(
            f"closed form needs constant laziness, got mode={p.laziness.mode}; "
            "use solve_foc_latency"
        )
    delta = _closed_form(p.spread_s, p.kappa, p.hurst_H)
    return _interval(delta, p, "closed-form")


def _grow_bracket(p: StochasticParams, x0: float) -> tuple[float, float]:
    lo = hi = x0
    for _ in range(BRACKET_MAX_STEPS):
        if foc_residual(lo, p) < 0:
            break
        lo /= BRACKET_GROWTH
    for _ in range(BRACKET_MAX_STEPS):
        if foc_residual(hi, p) > 0:
            break
        hi *= BRACKET_GROWTH
    if not (foc_residual(lo, p) <= 0 <= foc_residual(hi, p)):
        raise ConvergenceError("could not bracket the first-order condition", (lo, hi))
    return lo, hi


def _brent(p: StochasticParams, lo: float, hi: float) -> tuple[float, int]:
    root, result = scipy.optimize.brentq(
        foc_residual,
        lo,
        hi,
        args=(p,),
        xtol=BRENT_XTOL,
        maxiter=BRENT_MAX_ITER,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        raise ConvergenceError(f"brentq stopped: {result.flag}", (lo, hi))
    return root, result.iterations


def solve_foc_latency(p: StochasticParams) -> OptimalInterval:
    """
    Optimal interval with a trade-count power-law latency cost.

    alpha == 1 has the closed form with s replaced by s + lambda. For alpha > 1,
    Newton starts from the lambda = 0 closed form and keeps a sign bracket; a step
    that leaves the bracket or (0, inf), or a non-finite residual, falls back to
    Brent's bracketed method on a bracket grown geometrically from the start point.
    """
    if p.laziness.mode is LazinessMode.POWER_OF_TWO_LEVEL:
        p = replace(p, laziness=p.laziness.as_trade_count())
    elif p.laziness.is_constant:
        return delta_star_closed_form(p)

    lam, alpha = _latency_terms(p)
    if lam == 0:
        return _interval(_closed_form(p.spread_s, p.kappa, p.hurst_H), p, "closed-form")
    if alpha == 1:
        effective_spread = p.spread_s + lam
        return _interval(
            _closed_form(effective_spread, p.kappa, p.hurst_H), p, "closed-form"
        )

    tol = NEWTON_TOL * max(p.spread_s, 1.0)
    x = _closed_form(p.spread_s, p.kappa, p.hurst_H)
    lo, hi = 0.0, math.inf
    for i in range(1, NEWTON_MAX_ITER + 1):
        g = foc_residual(x, p)
        if not math.isfinite(g):
            break
        if abs(g) <= tol:
            return _interval(x, p, "newton", i)
        if g > 0:
            hi = min(hi, x)
        else:
            lo = max(lo, x)
        step = g / _foc_slope(x, p)
        x_next = x - step
        if not (math.isfinite(x_next) and lo < x_next < hi):
            logger.debug(f"newton step to {x_next!r} left ({lo!r}, {hi!r}), brentq")
            break
        x = x_next
    else:
        logger.debug(f"newton did not reach |g| <= {tol!r}, brentq")

    start = x if math.isfinite(x) and x > 0 else _closed_form(
        p.spread_s, p.kappa, p.hurst_H
    )
    b_lo, b_hi = _grow_bracket(p, start)
    root, iterations = _brent(p, b_lo, b_hi)
    if abs(foc_residual(root, p)) > tol:
        logger.warning(
            f"brentq stopped at floating resolution with |g| = "
            f"{abs(foc_residual(root, p))!r} > {tol!r}"
        )
    return _interval(root, p, "brentq", NEWTON_MAX_ITER + iterations)


def statics_closed_form(p: StochasticParams) -> IntervalStatics:
    """Partials of delta* via the log-derivative of the closed form."""
    if not p.laziness.is_constant:
        raise ContractError(
            f"statics are defined for constant laziness, got mode={p.laziness.mode}"
        )
    H, s, kappa = p.hurst_H, p.spread_s, p.kappa
    delta = _closed_form(s, kappa, H)
    d_dH = delta * (
        -(math.log(s) - math.log(kappa) - math.log(1.0 - H)) / H**2
        + 1.0 / (H * (1.0 - H))
    )
    return IntervalStatics(
        d_ds=delta / (H * s),
        d_dkappa=-delta / (H * kappa),
        d_dH=d_dH,
        d_dD=-d_dH,
    )
