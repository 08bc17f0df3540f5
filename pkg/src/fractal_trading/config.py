# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Flat key/value run configuration.

Every subcommand has a table of defaults. A YAML config file may set any key of
that table, command line flags override the file:

    defaults < config file < flags

Keys are the flag names with dashes replaced by underscores, e.g.

    hurst: 0.6
    n_steps: 4096
    method: cholesky
"""

import logging
import math
import os
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Any, cast

from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from src.fractal_trading.core_model import M_CAP_MAX
from src.fractal_trading.errors import IngestionError, UsageError
from src.fractal_trading.experiments import TimeAxis
from src.fractal_trading.fbm_engine import SEED_MAX, SamplerMethod
from src.fractal_trading.laziness import LazinessMode

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "FRACTAL_TRADING_OUTPUT_DIR"


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"


CHOICES: dict[str, type[StrEnum]] = {
    "format": OutputFormat,
    "method": SamplerMethod,
    "laziness_mode": LazinessMode,
    "time_axis": TimeAxis,
}

COMMON_DEFAULTS: dict[str, Any] = {
    "output": None,
    "format": "json",
}

_LAZINESS_DEFAULTS: dict[str, Any] = {
    "laziness_mode": "constant",
    "laziness_L0": 0.0,
    "laziness_lambda": 0.0,
    "laziness_alpha": 1.0,
}

_CSV_DEFAULTS: dict[str, Any] = {
    "csv": None,
    "date_column": "date",
    "price_column": "close",
    "log_transform": True,
    "time_axis": "index",
    "resample": False,
    "levels": None,
}

# Value types of the keys that default to None
_NONE_DEFAULT_TYPES: dict[str, Any] = {
    "output": "",
    "csv": "",
    "levels": 0,
    "sigma": 0.0,
}

COMMAND_DEFAULTS: dict[str, dict[str, Any]] = {
    "simulate": {
        "format": "csv",
        "hurst": 0.5,
        "n_steps": 1024,
        "horizon": 1.0,
        "sigma": 1.0,
        "drift": 0.0,
        "method": "circulant",
        "seed": 0,
    },
    "optimize-det": {
        "horizon": 1.0,
        "roughness": 0.3,
        "c0": 0.8,
        "spread": 0.02,
        "m_cap": 30,
        **_LAZINESS_DEFAULTS,
    },
    "optimize-fbm": {
        "hurst": 0.491,
        "kappa": 0.01336,
        "sigma": None,
        "spread": 0.025,
        "horizon": 1260.0,
        **_LAZINESS_DEFAULTS,
    },
    "estimate-hurst": dict(_CSV_DEFAULTS),
    "mc-experiment": {
        "hurst_values": [0.4, 0.6, 0.8],
        "m_lo": 1,
        "m_hi": 12,
        "kappa": 0.5,
        "spread": 0.002,
        "horizon": 1.0,
        "laziness_L0": 0.0,
        "laziness_lambda": 6e-4,
        "laziness_alpha": 1.4,
        "n_paths": 1000,
        "seed": 0,
        "method": "circulant",
        "workers": 1,
    },
    "empirical": {
        **_CSV_DEFAULTS,
        "spread": 0.025,
        "laziness_lambda": 0.003,
        "laziness_alpha": 1.3,
    },
}


@dataclass(frozen=True)
class Bound:
    """Admissible range of a numeric option."""

    lo: float | None = None
    hi: float | None = None
    lo_open: bool = True
    hi_open: bool = True

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else f"{self.lo}"
        hi = "inf" if self.hi is None else f"{self.hi}"
        opening = "(" if self.lo_open or self.lo is None else "["
        closing = ")" if self.hi_open or self.hi is None else "]"
        return f"{opening}{lo}, {hi}{closing}"

    def violation(self, value: float) -> str | None:
        """Why value is out of range, None when it is admissible."""
        if isinstance(value, float) and not math.isfinite(value):
            return "must be finite"
        if self.lo is not None and (
            value <= self.lo if self.lo_open else value < self.lo
        ):
            return f"must lie in {self}"
        if self.hi is not None and (
            value >= self.hi if self.hi_open else value > self.hi
        ):
            return f"must lie in {self}"
        return None


_POSITIVE = Bound(0.0)
_NONNEGATIVE = Bound(0.0, lo_open=False)


def _at_least(lo: int, hi: int | None = None) -> Bound:
    return Bound(lo, hi, lo_open=False, hi_open=False)


BOUNDS: dict[str, Bound] = {
    "hurst": Bound(0.0, 1.0),
    "hurst_values": Bound(0.0, 1.0),
    "n_steps": _at_least(1),
    "horizon": _POSITIVE,
    "sigma": _POSITIVE,
    "drift": Bound(),
    "seed": _at_least(0, SEED_MAX),
    "roughness": _POSITIVE,
    "c0": _NONNEGATIVE,
    "spread": _POSITIVE,
    "m_cap": _at_least(0, M_CAP_MAX),
    "kappa": _POSITIVE,
    "m_lo": _at_least(0),
    "m_hi": _at_least(0),
    "n_paths": _at_least(0),
    "workers": _at_least(1),
    "levels": _at_least(3),
    "laziness_L0": _NONNEGATIVE,
    "laziness_lambda": _NONNEGATIVE,
    "laziness_alpha": Bound(1.0, lo_open=False),
}

# The deterministic model admits a zero spread
_COMMAND_BOUNDS: dict[str, dict[str, Bound]] = {
    "optimize-det": {"spread": _NONNEGATIVE},
}


def bound_for(command: str | None, key: str) -> Bound | None:
    if command is not None and key in _COMMAND_BOUNDS.get(command, {}):
        return _COMMAND_BOUNDS[command][key]
    return BOUNDS.get(key)


def check_bounds(command: str, key: str, value: Any):
    bound = bound_for(command, key)
    if bound is None or value is None:
        return
    for v in value if isinstance(value, list) else [value]:
        problem = bound.violation(v)
        if problem:
            raise UsageError(f"'{key}' {problem}, got {v!r}")


def _coerce(key: str, value: Any, default: Any) -> Any:
    """Bring a config file value to the type of its default."""
    if value is None:
        return None
    try:
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise TypeError
            return value
        if isinstance(default, int):
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError
            return value
        if isinstance(default, float):
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if isinstance(default, list):
            if not isinstance(value, list):
                raise TypeError
            return [float(v) for v in value]
        if isinstance(value, list | dict):
            raise TypeError
        return str(value)
    except (TypeError, ValueError):
        expected = type(default).__name__
        raise UsageError(
            f"config key '{key}' expects {expected}, got {value!r}"
        ) from None


def load_config_file(file: Path) -> dict[str, Any]:
    """Read a flat YAML mapping. An empty file is an empty config."""
    try:
        with open(file, encoding="utf-8") as f:
            data = YAML(typ="safe").load(f)
    except OSError as e:
        raise IngestionError(f"cannot read config file: {e.strerror}", str(file)) from e
    except YAMLError as e:
        raise UsageError(f"{file}: invalid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(
            f"{file}: config must be a flat key/value mapping, "
            f"got {type(data).__name__}"
        )
    return cast(dict[str, Any], data)


def resolve_config(
    command: str,
    file_values: dict[str, Any],
    flag_values: dict[str, Any],
) -> dict[str, Any]:
    """Merge defaults, config file and flags into the effective config of `command`."""
    assert command in COMMAND_DEFAULTS, f"unknown command {command}"
    defaults = COMMON_DEFAULTS | COMMAND_DEFAULTS[command]

    unknown = sorted(set(file_values) - set(defaults))
    if unknown:
        raise UsageError(
            f"unknown config keys for '{command}': {', '.join(map(str, unknown))}"
        )

    effective = dict(defaults)
    for key, value in file_values.items():
        prototype = defaults[key]
        if prototype is None:
            prototype = _NONE_DEFAULT_TYPES[key]
        effective[key] = _coerce(key, value, prototype)
    for key, value in flag_values.items():
        assert key in defaults, f"flag {key} has no default for {command}"
        effective[key] = value

    for key, choices in CHOICES.items():
        if key in effective and effective[key] not in {c.value for c in choices}:
            raise UsageError(
                f"'{key}' must be one of {[c.value for c in choices]}, "
                f"got {effective[key]!r}"
            )

    for key, value in effective.items():
        check_bounds(command, key, value)

    logger.debug(f"effective config for {command}: {effective}")
    return effective


def resolve_output_path(
    output: str | None, command: str, output_format: str
) -> Path | None:
    """
    Where to write the result, None meaning stdout.

    FRACTAL_TRADING_OUTPUT_DIR, when set, is the base for relative output paths
    and the location of <command>.<format> when no output is given.
    """
    base = os.environ.get(OUTPUT_DIR_ENV)
    if output is None:
        if not base:
            return None
        return Path(base) / f"{command}.{output_format}"
    path = Path(output)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path
