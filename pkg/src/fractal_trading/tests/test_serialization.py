# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
import io
import json
from pathlib import Path

import numpy as np
import pandas as pd

from src.fractal_trading.core_model import ProfitCurve
from src.fractal_trading.laziness import LazinessMode, LazinessSpec
from src.fractal_trading.serialization import (
    store_csv,
    store_json,
    to_json_text,
)


def test_dataclasses_and_enums_encode_as_plain_json():
    payload = {
        "spec": LazinessSpec.power_of_two_level(0.5, 1.4),
        "mode": LazinessMode.CONSTANT,
        "where": Path("out") / "a.json",
    }
    assert json.loads(to_json_text(payload)) == {
        "spec": {
            "base_L0": 0.0,
            "scale_lambda": 0.5,
            "exponent_alpha": 1.4,
            "mode": "power-of-two-level",
        },
        "mode": "constant",
        "where": str(Path("out") / "a.json"),
    }


def test_numpy_values():
    payload = {"a": np.arange(3), "b": np.float64(0.25), "c": np.int64(7)}
    assert json.loads(to_json_text(payload)) == {"a": [0, 1, 2], "b": 0.25, "c": 7}


def test_floats_read_back_exactly():
    values = [0.1, 1 / 3, 2.0**-40, 1e300, -7.123456789012345]
    assert json.loads(to_json_text(values)) == values


def test_text_is_indented_and_ends_with_newline():
    text = to_json_text({"x": 1})
    assert text == '{\n  "x": 1\n}\n'


def test_nested_curve():
    curve = ProfitCurve.from_profits([0, 1], [1.0, 2.0])
    decoded = json.loads(to_json_text(curve))
    assert decoded["levels"] == [0, 1]
    assert decoded["m_star"] == 1
    assert decoded["gross"] == []


def test_store_json_creates_parents(tmp_path: Path):
    file = tmp_path / "nested" / "dir" / "result.json"
    store_json(file, {"H": 0.6})
    assert json.loads(file.read_text(encoding="utf-8")) == {"H": 0.6}


def test_csv_keeps_every_digit():
    buffer = io.StringIO()
    store_csv(buffer, [{"m": 1, "x": 0.1}, {"m": 2, "x": 1 / 3}], ["m", "x"])
    lines = buffer.getvalue().splitlines()
    assert lines == ["m,x", "1,0.10000000000000001", "2,0.33333333333333331"]
    frame = pd.read_csv(io.StringIO(buffer.getvalue()))
    assert frame["x"].tolist() == [0.1, 1 / 3]


def test_csv_to_file_creates_the_directory(tmp_path: Path):
    file = tmp_path / "out" / "curve.csv"
    store_csv(file, [{"a": 1.5}], ["a"])
    assert file.read_text(encoding="utf-8") == "a\n1.5\n"


def test_empty_rows_still_write_the_header():
    buffer = io.StringIO()
    store_csv(buffer, [], ["m", "profit"])
    assert buffer.getvalue() == "m,profit\n"
