# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************

project = "Fractal Trading Frequency"
version = "0.1"

extensions = [
    "myst_parser",
]

myst_enable_extensions = ["dollarmath"]

html_theme = "pydata_sphinx_theme"
exclude_patterns = ["_build"]
