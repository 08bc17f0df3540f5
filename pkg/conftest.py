# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
import pytest


def pytest_addoption(parser: pytest.Parser):
    """Add custom command line options to pytest"""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run the Monte-Carlo acceptance tests marked slow",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
