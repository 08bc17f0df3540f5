# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Command line frontend.

    fractal-trading <command> [--config FILE] [--output FILE] [--format json|csv] ...

Failures print one line to stderr,

    error: code=<exit code> kind=<usage|domain|numerical|io>: <message>

and exit with 2 (usage), 3 (domain), 4 (numerical) or 5 (I/O).
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NoReturn, TextIO

from src.fractal_trading.config import (
    COMMAND_DEFAULTS,
    OutputFormat,
    bound_for,
    load_config_file,
    resolve_config,
    resolve_output_path,
)
from src.fractal_trading.core_model import (
    DeterministicParams,
    concavity_premise_holds,
    marginal_decomposition,
    statics_deterministic,
)
from src.fractal_trading.errors import (
    FractalTradingError,
    IngestionError,
    UsageError,
)
from src.fractal_trading.experiments import (
    CostSpec,
    CsvSchema,
    McExperimentSpec,
    TimeAxis,
    load_price_csv,
    run_empirical,
    run_mc_experiment,
    sweep_deterministic,
    write_curve_csv,
    write_empirical_csv,
    write_fit_csv,
    write_interval_csv,
    write_mc_csv,
    write_path_csv,
)
from src.fractal_trading.fbm_engine import FbmConfig, SamplerMethod, sample_path
from src.fractal_trading.hurst import fit_scaling
from src.fractal_trading.laziness import LazinessMode, LazinessSpec
from src.fractal_trading.log import setup_logging
from src.fractal_trading.serialization import store_json, to_json_text
from src.fractal_trading.stochastic_opt import (
    StochasticParams,
    delta_star_closed_form,
    hausdorff_dimension,
    kappa_from_sigma,
    solve_foc_latency,
    statics_closed_form,
)

logger = logging.getLogger(__name__)

PROG = "fractal-trading"


class _ArgumentParser(argparse.ArgumentParser):
    """Raise instead of printing usage and exiting, so errors stay one line."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class CommandOutput:
    result: Any
    write_csv: Callable[[Path | TextIO], None]


def _number(
    key: str, kind: type[int] | type[float] = float, command: str | None = None
) -> Callable[[str], Any]:
    """argparse type for a numeric option, range-checked like config file values."""
    bound = bound_for(command, key)

    def parse(text: str) -> Any:
        try:
            value = kind(text)
        except ValueError:
            expected = "an integer" if kind is int else "a number"
            raise argparse.ArgumentTypeError(
                f"{key} must be {expected}, got {text!r}"
            ) from None
        problem = bound.violation(value) if bound else None
        if problem:
            raise argparse.ArgumentTypeError(f"{key} {problem}, got {value!r}")
        return value

    return parse


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="flat YAML file of option values")
    parser.add_argument(
        "-o",
        "--output",
        help="output file (default: stdout, or <command>.<format> under "
        "$FRACTAL_TRADING_OUTPUT_DIR)",
    )
    parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], help="output format"
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for solver decisions",
    )


def _add_laziness(parser: argparse.ArgumentParser, with_mode: bool = True):
    if with_mode:
        parser.add_argument(
            "--laziness-mode", choices=[m.value for m in LazinessMode], help="cost form"
        )
        parser.add_argument(
            "--laziness-L0", type=_number("laziness_L0"), help="constant cost L0"
        )
    parser.add_argument(
        "--laziness-lambda", type=_number("laziness_lambda"), help="scale lambda"
    )
    parser.add_argument(
        "--laziness-alpha",
        type=_number("laziness_alpha"),
        help="exponent alpha >= 1",
    )


def _add_csv(parser: argparse.ArgumentParser):
    parser.add_argument("--csv", help="price CSV with a header row")
    parser.add_argument("--date-column", help="date column name")
    parser.add_argument("--price-column", help="price column name")
    parser.add_argument(
        "--log-transform",
        action=argparse.BooleanOptionalAction,
        help="take natural logs of prices",
    )
    parser.add_argument(
        "--time-axis",
        choices=[a.value for a in TimeAxis],
        help="rows one period apart, or elapsed calendar days",
    )
    parser.add_argument(
        "--resample",
        action=argparse.BooleanOptionalAction,
        help="resample irregular calendar spacing instead of failing",
    )
    parser.add_argument(
        "--levels", type=_number("levels", int), help="dyadic levels of the fit"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog=PROG,
        allow_abbrev=False,
        description="Optimal trading frequency under fractal price dynamics.",
        argument_default=argparse.SUPPRESS,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(
            name, help=help, argument_default=argparse.SUPPRESS, allow_abbrev=False
        )
        _add_common(p)
        return p

    p = command("simulate", "sample one fBM path")
    p.add_argument("--hurst", type=_number("hurst"), help="Hurst exponent in (0, 1)")
    p.add_argument(
        "--n",
        "--n-steps",
        dest="n_steps",
        type=_number("n_steps", int),
        help="number of steps",
    )
    p.add_argument("--horizon", type=_number("horizon"), help="horizon T")
    p.add_argument("--sigma", type=_number("sigma"), help="volatility scale")
    p.add_argument("--drift", type=_number("drift"), help="drift mu")
    p.add_argument("--method", choices=[m.value for m in SamplerMethod])
    p.add_argument("--seed", type=_number("seed", int))

    p = command("optimize-det", "deterministic profit curve and its optimum")
    p.add_argument("--horizon", type=_number("horizon"), help="horizon T")
    p.add_argument(
        "--roughness", "-W", type=_number("roughness"), help="roughness W"
    )
    p.add_argument("--c0", type=_number("c0"), help="microstructure scale c0")
    p.add_argument("--spread",
        type=_number("spread", command="optimize-det"),
        help="effective spread s",)
    p.add_argument("--m-cap", type=_number("m_cap", int), help="level scan cap")
    _add_laziness(p)

    p = command("optimize-fbm", "optimal interval under fBM scaling")
    p.add_argument("--hurst", type=_number("hurst"), help="Hurst exponent in (0, 1)")
    p.add_argument("--kappa", type=_number("kappa"), help="scale kappa of E|dX|")
    p.add_argument("--sigma", type=_number("sigma"), help="volatility, sets kappa")
    p.add_argument("--spread", type=_number("spread"), help="effective spread s")
    p.add_argument("--horizon", type=_number("horizon"), help="horizon T")
    _add_laziness(p)

    p = command("estimate-hurst", "scaling fit of a price CSV")
    _add_csv(p)

    p = command("mc-experiment", "analytic and simulated profit curves per H")
    p.add_argument(
        "--hurst-values", nargs="+", type=_number("hurst_values"), help="H values"
    )
    p.add_argument("--m-lo", type=_number("m_lo", int), help="lowest level")
    p.add_argument("--m-hi", type=_number("m_hi", int), help="highest level")
    p.add_argument("--kappa", type=_number("kappa"))
    p.add_argument("--spread", type=_number("spread"))
    p.add_argument("--horizon", type=_number("horizon"))
    p.add_argument("--n-paths", type=_number("n_paths", int))
    p.add_argument("--seed", type=_number("seed", int))
    p.add_argument("--method", choices=[m.value for m in SamplerMethod])
    p.add_argument("--workers", type=_number("workers", int))
    p.add_argument(
        "--laziness-L0", type=_number("laziness_L0"), help="constant cost L0"
    )
    _add_laziness(p, with_mode=False)

    p = command("empirical", "realized vs theoretical profit curves of a price CSV")
    _add_csv(p)
    p.add_argument("--spread", type=_number("spread"), help="effective spread s")
    _add_laziness(p, with_mode=False)
    return parser


def _laziness(cfg: dict[str, Any]) -> LazinessSpec:
    return LazinessSpec(
        base_L0=cfg["laziness_L0"],
        scale_lambda=cfg["laziness_lambda"],
        exponent_alpha=cfg["laziness_alpha"],
        mode=cfg["laziness_mode"],
    )


def _csv_source(cfg: dict[str, Any]) -> tuple[Path, CsvSchema]:
    if cfg["csv"] is None:
        raise UsageError(
            "a price file is required: pass --csv or set 'csv' in --config"
        )
    schema = CsvSchema(
        date_column=cfg["date_column"],
        price_column=cfg["price_column"],
        log_transform=cfg["log_transform"],
        time_axis=cfg["time_axis"],
        resample=cfg["resample"],
    )
    return Path(cfg["csv"]), schema


def cmd_simulate(cfg: dict[str, Any]) -> CommandOutput:
    path = sample_path(
        FbmConfig(
            hurst_H=cfg["hurst"],
            sigma=cfg["sigma"],
            drift_mu=cfg["drift"],
            n_steps=cfg["n_steps"],
            horizon_T=cfg["horizon"],
            method=cfg["method"],
            seed=cfg["seed"],
        )
    )
    result = {"times": path.times, "values": path.values}
    return CommandOutput(result, lambda f: write_path_csv(f, path))


def cmd_optimize_det(cfg: dict[str, Any]) -> CommandOutput:
    p = DeterministicParams(
        horizon_T=cfg["horizon"],
        roughness_W=cfg["roughness"],
        micro_c0=cfg["c0"],
        spread_s=cfg["spread"],
        laziness=_laziness(cfg),
        m_cap=cfg["m_cap"],
    )
    curve = sweep_deterministic(p)
    assert curve.m_star is not None
    result = {
        "curve": curve,
        "delta_star": p.horizon_T / 2.0**curve.m_star,
        "marginals": [marginal_decomposition(m, p) for m in range(curve.m_max)],
        "concavity_premise": concavity_premise_holds(p, curve.m_max),
        "statics_at_m_star": statics_deterministic(curve.m_star, p),
    }
    return CommandOutput(result, lambda f: write_curve_csv(f, curve))


def cmd_optimize_fbm(cfg: dict[str, Any]) -> CommandOutput:
    kappa = cfg["kappa"]
    if cfg["sigma"] is not None:
        kappa = kappa_from_sigma(cfg["sigma"], cfg["hurst"])
    p = StochasticParams(
        hurst_H=cfg["hurst"],
        kappa=kappa,
        spread_s=cfg["spread"],
        horizon_T=cfg["horizon"],
        laziness=_laziness(cfg),
    )
    if p.laziness.is_constant:
        optimum = delta_star_closed_form(p)
        statics = statics_closed_form(p)
    else:
        optimum = solve_foc_latency(p)
        statics = None
    result = {
        "optimum": optimum,
        "statics": statics,
        "kappa": kappa,
        "fractal_dimension": hausdorff_dimension(p.hurst_H),
    }
    return CommandOutput(result, lambda f: write_interval_csv(f, optimum))


def cmd_estimate_hurst(cfg: dict[str, Any]) -> CommandOutput:
    file, schema = _csv_source(cfg)
    fit = fit_scaling(load_price_csv(file, schema), cfg["levels"])
    return CommandOutput(fit, lambda f: write_fit_csv(f, fit))


def cmd_mc(cfg: dict[str, Any]) -> CommandOutput:
    spec = McExperimentSpec(
        hurst_values=tuple(cfg["hurst_values"]),
        m_lo=cfg["m_lo"],
        m_hi=cfg["m_hi"],
        kappa=cfg["kappa"],
        spread_s=cfg["spread"],
        horizon_T=cfg["horizon"],
        laziness=LazinessSpec.power_of_two_level(
            cfg["laziness_lambda"], cfg["laziness_alpha"], cfg["laziness_L0"]
        ),
        n_paths=cfg["n_paths"],
        seed=cfg["seed"],
        method=cfg["method"],
        workers=cfg["workers"],
    )
    result = run_mc_experiment(spec)
    return CommandOutput(result, lambda f: write_mc_csv(f, result))


def cmd_empirical(cfg: dict[str, Any]) -> CommandOutput:
    file, schema = _csv_source(cfg)
    costs = CostSpec(
        spread_s=cfg["spread"],
        scale_lambda=cfg["laziness_lambda"],
        exponent_alpha=cfg["laziness_alpha"],
    )
    result = run_empirical(file, costs, cfg["levels"], schema)
    return CommandOutput(result, lambda f: write_empirical_csv(f, result))


COMMANDS: dict[str, Callable[[dict[str, Any]], CommandOutput]] = {
    "simulate": cmd_simulate,
    "optimize-det": cmd_optimize_det,
    "optimize-fbm": cmd_optimize_fbm,
    "estimate-hurst": cmd_estimate_hurst,
    "mc-experiment": cmd_mc,
    "empirical": cmd_empirical,
}
assert set(COMMANDS) == set(COMMAND_DEFAULTS)


def _emit(command: str, cfg: dict[str, Any], output: CommandOutput):
    output_format = OutputFormat(cfg["format"])
    target = resolve_output_path(cfg["output"], command, output_format)
    try:
        if output_format is OutputFormat.CSV:
            if target is None:
                output.write_csv(sys.stdout)
            else:
                output.write_csv(target)
        else:
            payload = {
                "command": command,
                "metadata": {
                    "config": {k: v for k, v in cfg.items() if k != "output"}
                },
                "result": output.result,
            }
            if target is None:
                sys.stdout.write(to_json_text(payload))
            else:
                store_json(target, payload)
    except OSError as e:
        raise IngestionError(f"cannot write output: {e.strerror}", str(target)) from e
    if target is not None:
        logger.info(f"wrote {target}")


def run(argv: Sequence[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    setup_logging(args.pop("verbose", 0))
    config_file = args.pop("config", None)
    file_values = load_config_file(config_file) if config_file is not None else {}
    cfg = resolve_config(command, file_values, args)
    _emit(command, cfg, COMMANDS[command](cfg))
    return 0


def _one_line(text: str) -> str:
    return " ".join(text.split())


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except FractalTradingError as e:
        print(
            f"error: code={e.exit_code} kind={e.kind}: {_one_line(str(e))}",
            file=sys.stderr,
        )
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
