# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
import sys

from src.fractal_trading.cli import main

sys.exit(main())
