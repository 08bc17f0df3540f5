# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
from pathlib import Path

import pytest

from src.fractal_trading.config import (
    COMMAND_DEFAULTS,
    OUTPUT_DIR_ENV,
    load_config_file,
    resolve_config,
    resolve_output_path,
)
from src.fractal_trading.errors import IngestionError, UsageError


class TestResolveConfig:
    def test_defaults(self):
        cfg = resolve_config("optimize-fbm", {}, {})
        assert cfg["hurst"] == 0.491
        assert cfg["format"] == "json"
        assert cfg["output"] is None
        assert cfg["sigma"] is None

    def test_simulate_writes_csv_by_default(self):
        assert resolve_config("simulate", {}, {})["format"] == "csv"

    def test_flags_override_file_override_defaults(self):
        cfg = resolve_config(
            "simulate", {"hurst": 0.7, "n_steps": 16}, {"n_steps": 8}
        )
        assert cfg["hurst"] == 0.7
        assert cfg["n_steps"] == 8
        assert cfg["seed"] == 0

    def test_file_values_take_the_default_type(self):
        cfg = resolve_config(
            "mc-experiment", {"kappa": 1, "hurst_values": [0.3, 1]}, {}
        )
        assert cfg["kappa"] == 1.0
        assert isinstance(cfg["kappa"], float)
        assert cfg["hurst_values"] == [0.3, 1.0]

    def test_none_defaults_have_types(self):
        cfg = resolve_config("estimate-hurst", {"csv": "prices.csv", "levels": 5}, {})
        assert cfg["csv"] == "prices.csv"
        assert cfg["levels"] == 5

    def test_unknown_key(self):
        with pytest.raises(UsageError, match="hurst_value"):
            resolve_config("mc-experiment", {"hurst_value": [0.5]}, {})

    def test_key_of_another_command(self):
        with pytest.raises(UsageError, match="unknown config keys"):
            resolve_config("optimize-det", {"n_paths": 10}, {})

    @pytest.mark.parametrize(
        "key, value",
        [
            ("n_steps", 1.5),
            ("n_steps", True),
            ("n_steps", "many"),
            ("hurst", "high"),
            ("hurst", False),
            ("method", ["circulant"]),
        ],
    )
    def test_wrong_types(self, key: str, value: object):
        with pytest.raises(UsageError, match=f"config key '{key}'"):
            resolve_config("simulate", {key: value}, {})

    def test_bool_keys_need_booleans(self):
        with pytest.raises(UsageError):
            resolve_config("empirical", {"log_transform": "yes"}, {})

    @pytest.mark.parametrize(
        "command, key, value",
        [
            ("simulate", "method", "spectral"),
            ("simulate", "format", "xml"),
            ("optimize-det", "laziness_mode", "quadratic"),
            ("empirical", "time_axis", "weekly"),
        ],
    )
    def test_choices(self, command: str, key: str, value: str):
        with pytest.raises(UsageError, match=key):
            resolve_config(command, {key: value}, {})

    @pytest.mark.parametrize(
        "command, key, value",
        [
            ("simulate", "hurst", 1.5),
            ("simulate", "seed", -1),
            ("simulate", "sigma", float("nan")),
            ("optimize-det", "m_cap", 2000),
            ("optimize-det", "spread", -0.01),
            ("optimize-fbm", "spread", 0.0),
            ("mc-experiment", "hurst_values", [0.4, 1.2]),
            ("empirical", "laziness_alpha", 0.5),
        ],
    )
    def test_file_values_are_range_checked(self, command: str, key: str, value: object):
        with pytest.raises(UsageError, match=key):
            resolve_config(command, {key: value}, {})

    def test_zero_spread_is_admissible_for_the_deterministic_model(self):
        cfg = resolve_config("optimize-det", {"spread": 0.0}, {})
        assert cfg["spread"] == 0.0

    def test_every_command_has_output_keys(self):
        for command in COMMAND_DEFAULTS:
            cfg = resolve_config(command, {}, {})
            assert {"output", "format"} <= set(cfg)


class TestLoadConfigFile:
    def test_flat_mapping(self, tmp_path: Path):
        file = tmp_path / "run.yaml"
        file.write_text("hurst: 0.6\nn_steps: 4096\nmethod: cholesky\n")
        assert load_config_file(file) == {
            "hurst": 0.6,
            "n_steps": 4096,
            "method": "cholesky",
        }

    def test_empty_file(self, tmp_path: Path):
        file = tmp_path / "empty.yaml"
        file.write_text("")
        assert load_config_file(file) == {}

    def test_not_a_mapping(self, tmp_path: Path):
        file = tmp_path / "list.yaml"
        file.write_text("- 1\n- 2\n")
        with pytest.raises(UsageError, match="mapping"):
            load_config_file(file)

    def test_invalid_yaml(self, tmp_path: Path):
        file = tmp_path / "broken.yaml"
        file.write_text("hurst: [0.5\n")
        with pytest.raises(UsageError, match="invalid YAML"):
            load_config_file(file)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(IngestionError) as e:
            load_config_file(tmp_path / "missing.yaml")
        assert e.value.exit_code == 5


class TestResolveOutputPath:
    def test_stdout_by_default(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
        assert resolve_output_path(None, "simulate", "csv") is None
        assert resolve_output_path("out/a.json", "simulate", "json") == Path(
            "out/a.json"
        )

    def test_output_dir_from_environment(
        self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path
    ):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        assert resolve_output_path(None, "mc-experiment", "csv") == (
            tmp_path / "mc-experiment.csv"
        )
        assert resolve_output_path("a.json", "simulate", "json") == tmp_path / "a.json"
        absolute = tmp_path / "elsewhere" / "b.json"
        assert resolve_output_path(str(absolute), "simulate", "json") == absolute
