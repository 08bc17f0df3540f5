# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Study pipelines built on the models.

mc-experiment   expected profit on the dyadic grid T/2^m for several H, next to the
                same curve measured on simulated fBM paths and the theory optima.
empirical       scaling fit of a price series, the realized profit curve at each
                dyadic level and the theory curve from the fitted parameters.
sweep           the full deterministic profit curve.

Also CSV ingestion of price series and the flat CSV writers for results.
"""

from __future__ import annotations

import hashlib
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import TextIO

import numpy as np
import numpy.typing as npt
import pandas as pd

from src.fractal_trading.core_model import (
    DeterministicParams,
    ProfitCurve,
    optimize_deterministic,
    verify_uniqueness,
)
from src.fractal_trading.errors import DomainError, IngestionError
from src.fractal_trading.fbm_engine import (
    SEED_MAX,
    FbmConfig,
    FbmPath,
    SamplerMethod,
    sample_path,
)
from src.fractal_trading.hurst import (
    UNIFORM_SPACING_RTOL,
    HurstFit,
    PricePath,
    fit_scaling,
    resample_uniform,
)
from src.fractal_trading.laziness import LazinessSpec
from src.fractal_trading.log import RunLogger
from src.fractal_trading.serialization import store_csv
from src.fractal_trading.stochastic_opt import (
    OptimalInterval,
    StochasticParams,
    delta_star_closed_form,
    hausdorff_dimension,
    sigma_from_kappa,
    solve_foc_latency,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


class TimeAxis(StrEnum):
    INDEX = "index"
    CALENDAR = "calendar"


@dataclass(frozen=True)
class CsvSchema:
    date_column: str = "date"
    price_column: str = "close"
    log_transform: bool = True
    time_axis: TimeAxis = TimeAxis.INDEX
    resample: bool = False

    def __post_init__(self):
        object.__setattr__(self, "time_axis", TimeAxis(self.time_axis))


@dataclass(frozen=True)
class CostSpec:
    """Execution costs of the empirical study: spread plus lambda * n^alpha."""

    spread_s: float
    scale_lambda: float = 0.0
    exponent_alpha: float = 1.0

    def __post_init__(self):
        if not self.spread_s >= 0:
            raise DomainError(f"spread_s must be >= 0, got {self.spread_s!r}")
        # validates lambda and alpha
        self.laziness()

    def laziness(self) -> LazinessSpec:
        return LazinessSpec.power_of_trade_count(self.scale_lambda, self.exponent_alpha)


REFERENCE_EMPIRICAL_COSTS = CostSpec(
    spread_s=0.025, scale_lambda=0.003, exponent_alpha=1.3
)


@dataclass(frozen=True)
class McExperimentSpec:
    hurst_values: tuple[float, ...] = (0.40, 0.60, 0.80)
    m_lo: int = 1
    m_hi: int = 12
    kappa: float = 0.5
    spread_s: float = 0.002
    horizon_T: float = 1.0
    laziness: LazinessSpec = field(
        default_factory=lambda: LazinessSpec.power_of_two_level(6e-4, 1.4)
    )
    n_paths: int = 1000
    seed: int = 0
    method: SamplerMethod = SamplerMethod.CIRCULANT
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "hurst_values", tuple(self.hurst_values))
        object.__setattr__(self, "method", SamplerMethod(self.method))
        if not self.hurst_values:
            raise DomainError("hurst_values must not be empty")
        if not 0 <= self.m_lo <= self.m_hi:
            raise DomainError(
                "level range must satisfy 0 <= m_lo <= m_hi, "
                f"got [{self.m_lo}, {self.m_hi}]"
            )
        if self.n_paths < 0:
            raise DomainError(f"n_paths must be >= 0, got {self.n_paths}")
        if not 0 <= self.seed <= SEED_MAX:
            raise DomainError(
                f"seed must be a 64-bit unsigned integer, got {self.seed}"
            )
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")
        # each H must give valid model parameters
        for H in self.hurst_values:
            self.params_for(H)

    @property
    def levels(self) -> range:
        return range(self.m_lo, self.m_hi + 1)

    def params_for(self, H: float) -> StochasticParams:
        return StochasticParams(
            hurst_H=H,
            kappa=self.kappa,
            spread_s=self.spread_s,
            horizon_T=self.horizon_T,
            laziness=self.laziness,
        )


REFERENCE_MC_DEFAULTS = McExperimentSpec()


@dataclass(frozen=True)
class McHurstRecord:
    hurst_H: float
    fractal_dimension: float
    profit_curve: ProfitCurve
    simulated_curve: ProfitCurve | None
    m_star_sim: int
    m_star_theory_costfree: int
    m_star_theory_latency: int
    delta_star_costfree: float
    delta_star_latency: float
    relative_gap: float
    level_gap: int
    analytic_mean_abs: tuple[float, ...]
    simulated_mean_abs: tuple[float, ...] = ()
    simulated_mean_abs_stderr: tuple[float, ...] = ()


@dataclass(frozen=True)
class McExperimentResult:
    spec: McExperimentSpec
    records: tuple[McHurstRecord, ...]
    diagnostics: tuple[str, ...] = ()


@dataclass(frozen=True)
class EmpiricalResult:
    fit: HurstFit
    empirical_curve: ProfitCurve
    theory_curve: ProfitCurve
    m_star_emp: int
    m_star_theory: int
    theory_optimum: OptimalInterval
    horizon_T: float
    n_increments: int
    costs: CostSpec
    diagnostics: tuple[str, ...] = ()


def derive_path_seed(seed: int, h_index: int, path_index: int) -> int:
    """Seed of one Monte-Carlo path: seed XOR a stable hash of (H index, path index)."""
    digest = hashlib.sha256(f"{h_index}:{path_index}".encode()).digest()
    return seed ^ int.from_bytes(digest[:8], "big")


def _is_unimodal(profits: Sequence[float]) -> bool:
    """No rise after the curve has started to fall."""
    falling = False
    for a, b in zip(profits, profits[1:]):
        if b <= a:
            falling = True
        elif falling:
            return False
    return True


def _curve(
    levels: Sequence[int],
    gross: Sequence[float],
    friction: Sequence[float],
    laziness: Sequence[float],
) -> ProfitCurve:
    profits = [g - f - lz for g, f, lz in zip(gross, friction, laziness)]
    curve = ProfitCurve.from_profits(
        levels,
        profits,
        non_unimodal=not _is_unimodal(profits),
        gross=tuple(float(g) for g in gross),
        friction=tuple(float(f) for f in friction),
        laziness=tuple(float(lz) for lz in laziness),
    )
    assert curve.m_star is not None
    deltas = [b - a for a, b in zip(profits, profits[1:])]
    return replace(
        curve, certified=verify_uniqueness(deltas, curve.m_star - curve.levels[0])
    )


def analytic_curve(p: StochasticParams, levels: Sequence[int]) -> ProfitCurve:
    """Expected profit at delta = T/2^m, split into gross, friction and laziness."""
    gross, friction, laziness = [], [], []
    for m in levels:
        delta = p.horizon_T / 2.0**m
        gross.append(p.kappa * p.horizon_T * delta ** (p.hurst_H - 1.0))
        friction.append(p.horizon_T * p.spread_s / delta)
        laziness.append(p.laziness.at_level(m))
    return _curve(levels, gross, friction, laziness)


def _level_mean_abs(path: FbmPath, levels: Sequence[int], m_hi: int) -> FloatArray:
    """Mean |increment| of one path sampled at 2^m_hi steps, for each level m."""
    return np.array(
        [np.abs(np.diff(path.values[:: 2 ** (m_hi - m)])).mean() for m in levels]
    )


def _simulate_level_means(spec: McExperimentSpec, h_index: int) -> FloatArray:
    """(n_paths, n_levels) realized mean |increment|, rows in path-index order."""
    H = spec.hurst_values[h_index]
    sigma = sigma_from_kappa(spec.kappa)
    n_steps = 2**spec.m_hi

    def one_path(path_index: int) -> FloatArray:
        cfg = FbmConfig(
            hurst_H=H,
            sigma=sigma,
            n_steps=n_steps,
            horizon_T=spec.horizon_T,
            method=spec.method,
            seed=derive_path_seed(spec.seed, h_index, path_index),
        )
        return _level_mean_abs(sample_path(cfg), spec.levels, spec.m_hi)

    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        rows = list(pool.map(one_path, range(spec.n_paths)))
    return np.vstack(rows)


def _mc_record(
    spec: McExperimentSpec, h_index: int, run_log: RunLogger
) -> McHurstRecord:
    H = spec.hurst_values[h_index]
    context = f"H={H}"
    p = spec.params_for(H)
    levels = list(spec.levels)
    deltas = [spec.horizon_T / 2.0**m for m in levels]

    curve = analytic_curve(p, levels)
    if not curve.has_interior_maximum:
        run_log.warning(
            f"analytic curve peaks at the edge m={curve.m_star} of "
            f"[{spec.m_lo}, {spec.m_hi}]",
            context,
        )

    costfree = delta_star_closed_form(
        StochasticParams(H, spec.kappa, spec.spread_s, spec.horizon_T)
    )
    latency = solve_foc_latency(p)
    if not spec.m_lo <= costfree.m_star_rounded <= spec.m_hi:
        run_log.info(
            f"cost-free optimum m={costfree.m_star_rounded} lies outside the "
            "level range",
            context,
        )

    analytic_mean_abs = tuple(spec.kappa * d**H for d in deltas)
    simulated_curve = None
    simulated_mean_abs: tuple[float, ...] = ()
    stderr: tuple[float, ...] = ()
    m_star_sim = curve.m_star
    if spec.n_paths > 0:
        means = _simulate_level_means(spec, h_index)
        level_means = means.mean(axis=0)
        simulated_mean_abs = tuple(float(v) for v in level_means)
        if spec.n_paths > 1:
            stderr = tuple(
                float(v) for v in means.std(axis=0, ddof=1) / math.sqrt(spec.n_paths)
            )
        simulated_curve = _curve(
            levels,
            [2.0**m * v for m, v in zip(levels, level_means)],
            curve.friction,
            curve.laziness,
        )
        m_star_sim = simulated_curve.m_star
    assert m_star_sim is not None

    delta_sim = spec.horizon_T / 2.0**m_star_sim
    level_gap = abs(m_star_sim - latency.m_star_rounded)
    if level_gap > 1:
        run_log.warning(
            f"simulated optimum m={m_star_sim} is {level_gap} levels from the "
            f"latency theory m={latency.m_star_rounded}",
            context,
        )
    logger.info(
        f"H={H}: m*_sim={m_star_sim}, m*_theory={latency.m_star_rounded} "
        f"(cost-free {costfree.m_star_rounded})"
    )
    return McHurstRecord(
        hurst_H=H,
        fractal_dimension=hausdorff_dimension(H),
        profit_curve=curve,
        simulated_curve=simulated_curve,
        m_star_sim=m_star_sim,
        m_star_theory_costfree=costfree.m_star_rounded,
        m_star_theory_latency=latency.m_star_rounded,
        delta_star_costfree=costfree.delta_star,
        delta_star_latency=latency.delta_star,
        relative_gap=abs(delta_sim - latency.delta_star) / latency.delta_star,
        level_gap=level_gap,
        analytic_mean_abs=analytic_mean_abs,
        simulated_mean_abs=simulated_mean_abs,
        simulated_mean_abs_stderr=stderr,
    )


def run_mc_experiment(
    spec: McExperimentSpec = REFERENCE_MC_DEFAULTS,
) -> McExperimentResult:
    """
    For each H: the analytic profit curve over [m_lo, m_hi], the curve measured on
    n_paths simulated paths (skipped when n_paths == 0) and both theory optima.
    """
    run_log = RunLogger(logger, "mc-experiment")
    logger.info(
        f"mc experiment: H={list(spec.hurst_values)}, m={spec.m_lo}..{spec.m_hi}, "
        f"{spec.n_paths} paths, seed={spec.seed}"
    )
    records = tuple(_mc_record(spec, i, run_log) for i in range(len(spec.hurst_values)))

    ordered = [r.m_star_sim for r in sorted(records, key=lambda r: r.hurst_H)]
    if any(b > a for a, b in zip(ordered, ordered[1:])):
        run_log.warning(f"m*_sim is not nonincreasing in H: {ordered}")
    run_log.flush_summary()
    return McExperimentResult(
        spec=spec, records=records, diagnostics=tuple(run_log.diagnostics)
    )


def sweep_deterministic(p: DeterministicParams) -> ProfitCurve:
    """Full deterministic profit curve on 0..m_max for plotting."""
    curve = optimize_deterministic(p)
    logger.info(
        f"deterministic sweep: m_max={curve.m_max}"
        f"{' (capped)' if curve.capped else ''}, m*={curve.m_star}"
    )
    return curve


def empirical_curve(path: PricePath, costs: CostSpec) -> ProfitCurve:
    """
    Realized profit of trading every T/2^m on the observed series.

    Level m trades n = 2^m times over windows of k = N // 2^m samples from index 0,
    dropping the tail. Profit = sum |increments| - n*s - lambda*n^alpha.
    """
    n_total = path.n_increments
    levels = range(int(math.floor(math.log2(n_total))) + 1)
    laziness_spec = costs.laziness()
    gross, friction, laziness = [], [], []
    for m in levels:
        n_trades = 2**m
        k = n_total // n_trades
        increments = np.diff(path.log_prices[: n_trades * k + 1 : k])
        gross.append(float(np.abs(increments).sum()))
        friction.append(n_trades * costs.spread_s)
        laziness.append(laziness_spec.for_trade_count(n_trades))
    return _curve(levels, gross, friction, laziness)


def run_empirical(
    path_csv: Path,
    costs: CostSpec = REFERENCE_EMPIRICAL_COSTS,
    m_levels: int | None = None,
    schema: CsvSchema | None = None,
) -> EmpiricalResult:
    """Scaling fit, realized and theoretical profit curves of one price series."""
    run_log = RunLogger(logger, "empirical")
    path = load_price_csv(path_csv, schema or CsvSchema())
    fit = fit_scaling(path, m_levels)
    if fit.r_squared < 0.9:
        run_log.warning(f"scaling fit is poor: R^2 = {fit.r_squared}", str(path_csv))

    horizon = path.n_increments * path.delta_t
    curve = empirical_curve(path, costs)
    p = StochasticParams(
        hurst_H=fit.H_hat,
        kappa=fit.kappa_hat,
        spread_s=costs.spread_s,
        horizon_T=horizon,
        laziness=LazinessSpec.power_of_two_level(
            costs.scale_lambda, costs.exponent_alpha
        ),
    )
    theory = analytic_curve(p, curve.levels)
    optimum = solve_foc_latency(p)
    assert curve.m_star is not None and theory.m_star is not None
    logger.info(
        f"empirical: H_hat={fit.H_hat}, kappa_hat={fit.kappa_hat}, "
        f"m*_emp={curve.m_star}, m*_theory={theory.m_star}, delta*={optimum.delta_star}"
    )
    run_log.flush_summary()
    return EmpiricalResult(
        fit=fit,
        empirical_curve=curve,
        theory_curve=theory,
        m_star_emp=curve.m_star,
        m_star_theory=theory.m_star,
        theory_optimum=optimum,
        horizon_T=horizon,
        n_increments=path.n_increments,
        costs=costs,
        diagnostics=tuple(run_log.diagnostics),
    )


def _read_frame(file: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(
            file,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except FileNotFoundError as e:
        raise IngestionError("file not found", str(file)) from e
    except pd.errors.EmptyDataError as e:
        raise IngestionError("file is empty", str(file)) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise IngestionError(f"malformed CSV: {e}", str(file)) from e
    except OSError as e:
        raise IngestionError(f"cannot read: {e.strerror}", str(file)) from e


def _first_bad_row(bad: npt.NDArray[np.bool_]) -> int:
    # header is line 1
    return int(np.flatnonzero(bad)[0]) + 2


def _parse_columns(
    frame: pd.DataFrame, schema: CsvSchema, file: str
) -> tuple[pd.Series, pd.Series]:
    missing = [
        c for c in (schema.date_column, schema.price_column) if c not in frame.columns
    ]
    if missing:
        raise IngestionError(
            f"missing columns {missing}, found {list(frame.columns)}", file
        )

    dates = pd.to_datetime(frame[schema.date_column], errors="coerce", format="ISO8601")
    bad = dates.isna().to_numpy()
    if bad.any():
        line = _first_bad_row(bad)
        raise IngestionError(
            f"unparseable date {frame[schema.date_column].iloc[line - 2]!r}", file, line
        )

    prices = pd.to_numeric(frame[schema.price_column], errors="coerce")
    bad = (prices.isna() | ~np.isfinite(prices)).to_numpy()
    if bad.any():
        line = _first_bad_row(bad)
        raise IngestionError(
            f"unparseable price {frame[schema.price_column].iloc[line - 2]!r}",
            file,
            line,
        )
    if schema.log_transform and not (prices > 0).all():
        line = _first_bad_row((prices <= 0).to_numpy())
        raise IngestionError(
            f"price {prices.iloc[line - 2]!r} must be > 0 for the log transform",
            file,
            line,
        )
    return dates, prices.astype(np.float64)


def _modal_spacing(steps: FloatArray) -> float:
    values, counts = np.unique(steps, return_counts=True)
    return float(values[np.argmax(counts)])


def load_price_csv(file: Path, schema: CsvSchema | None = None) -> PricePath:
    """
    Read a date/price CSV into a PricePath, sorted by date.

    time_axis=index puts consecutive rows one period apart (trading days for daily
    closes). time_axis=calendar measures elapsed days; the step is the modal spacing
    and irregular spacing is rejected unless resample is set.
    """
    schema = schema or CsvSchema()
    name = str(file)
    frame = _read_frame(file)
    if len(frame) < 2:
        raise IngestionError(f"need at least 2 rows, got {len(frame)}", name)
    dates, prices = _parse_columns(frame, schema, name)

    order = np.argsort(dates.to_numpy(), kind="stable")
    sorted_dates = dates.iloc[order].reset_index(drop=True)
    duplicated = sorted_dates.duplicated().to_numpy()
    if duplicated.any():
        raise IngestionError(
            f"duplicate date {sorted_dates[duplicated].iloc[0]}", name
        )
    values = prices.to_numpy()[order]
    if schema.log_transform:
        values = np.log(values)
    logger.debug(f"loaded {len(values)} rows from {name}")

    if schema.time_axis is TimeAxis.INDEX:
        return PricePath.uniform(values, delta_t=1.0)

    times = ((sorted_dates - sorted_dates.iloc[0]) / pd.Timedelta(days=1)).to_numpy(
        dtype=np.float64
    )
    steps = np.diff(times)
    delta_t = _modal_spacing(steps)
    irregular = ~np.isclose(steps, delta_t, rtol=UNIFORM_SPACING_RTOL, atol=0.0)
    if not irregular.any():
        return PricePath(times, values, delta_t)
    if not schema.resample:
        row = int(np.flatnonzero(irregular)[0]) + 1
        raise IngestionError(
            f"irregular spacing of {steps[row - 1]} days at sorted row {row + 1} "
            f"(modal spacing {delta_t}); set resample or use time_axis=index",
            name,
        )
    grid, resampled, step = resample_uniform(times, values)
    logger.info(f"resampled {name} onto a {step}-day grid")
    return PricePath(grid, resampled, step)


def write_curve_csv(file: Path | TextIO, curve: ProfitCurve):
    def component(values: tuple[float, ...], i: int) -> float | None:
        return values[i] if values else None

    rows = [
        {
            "m": m,
            "profit": r,
            "gross": component(curve.gross, i),
            "friction": component(curve.friction, i),
            "laziness": component(curve.laziness, i),
        }
        for i, (m, r) in enumerate(zip(curve.levels, curve.profits))
    ]
    store_csv(file, rows, ["m", "profit", "gross", "friction", "laziness"])


def write_mc_csv(file: Path | TextIO, result: McExperimentResult):
    """One row per (H, m)."""
    rows = []
    for record in result.records:
        curve, sim = record.profit_curve, record.simulated_curve
        for i, m in enumerate(curve.levels):
            rows.append(
                {
                    "H": record.hurst_H,
                    "m": m,
                    "delta": result.spec.horizon_T / 2.0**m,
                    "analytic_profit": curve.profits[i],
                    "simulated_profit": sim.profits[i] if sim else None,
                    "analytic_mean_abs": record.analytic_mean_abs[i],
                    "simulated_mean_abs": (
                        record.simulated_mean_abs[i]
                        if record.simulated_mean_abs
                        else None
                    ),
                }
            )
    store_csv(
        file,
        rows,
        [
            "H",
            "m",
            "delta",
            "analytic_profit",
            "simulated_profit",
            "analytic_mean_abs",
            "simulated_mean_abs",
        ],
    )


def write_path_csv(file: Path | TextIO, path: FbmPath):
    store_csv(
        file,
        [{"time": t, "value": v} for t, v in zip(path.times, path.values)],
        ["time", "value"],
    )


def write_fit_csv(file: Path | TextIO, fit: HurstFit):
    """One row per dyadic lag of the scaling regression."""
    rows = [
        {
            "level": m,
            "lag": 2**m * fit.delta_t,
            "mean_abs_increment": v,
            "residual": r,
        }
        for m, v, r in zip(fit.levels_used, fit.mean_abs_increments, fit.residuals)
    ]
    store_csv(file, rows, ["level", "lag", "mean_abs_increment", "residual"])


def write_interval_csv(file: Path | TextIO, interval: OptimalInterval):
    store_csv(
        file,
        [{f: getattr(interval, f) for f in interval.__dataclass_fields__}],
        list(interval.__dataclass_fields__),
    )


def write_empirical_csv(file: Path | TextIO, result: EmpiricalResult):
    """One row per level: realized and theoretical profit side by side."""
    rows = [
        {
            "m": m,
            "delta": result.horizon_T / 2.0**m,
            "empirical_profit": r_emp,
            "theory_profit": r_theory,
        }
        for m, r_emp, r_theory in zip(
            result.empirical_curve.levels,
            result.empirical_curve.profits,
            result.theory_curve.profits,
        )
    ]
    store_csv(file, rows, ["m", "delta", "empirical_profit", "theory_profit"])
