# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
JSON and CSV writers for results.

JSON floats use Python's shortest round-trip repr, CSV floats are written
with 17 significant digits; both read back to the identical double.
"""

import dataclasses
import json
from collections.abc import Mapping, Sequence
from enum import Enum
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd

CSV_FLOAT_FORMAT = "%.17g"


class ResultEncoder(json.JSONEncoder):
    def default(self, o: object):
        if dataclasses.is_dataclass(o) and not isinstance(o, type):
            return {f.name: getattr(o, f.name) for f in dataclasses.fields(o)}
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, Enum):
            return o.value
        if isinstance(o, Path):
            return str(o)
        return super().default(o)


def to_json_text(payload: Any) -> str:
    return json.dumps(payload, cls=ResultEncoder, indent=2, ensure_ascii=False) + "\n"


def store_json(file: Path, payload: Any):
    # On a fresh output directory the parent may not exist yet
    file.parent.mkdir(parents=True, exist_ok=True)
    file.write_text(to_json_text(payload), encoding="utf-8")


def store_csv(
    file: Path | TextIO, rows: Sequence[Mapping[str, Any]], columns: Sequence[str]
):
    if isinstance(file, Path):
        file.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(list(rows), columns=list(columns))
    frame.to_csv(
        file,
        index=False,
        float_format=CSV_FLOAT_FORMAT,
        lineterminator="\n",
        encoding="utf-8",
    )
