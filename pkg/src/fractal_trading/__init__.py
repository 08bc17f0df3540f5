# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Optimal trading frequency of an investor who sees the whole price path but pays
for every trade and every decision.

core_model      deterministic fractal model on the dyadic grid
fbm_engine      fractional Brownian motion sampling
stochastic_opt  optimal interval under fBM scaling
hurst           scaling estimation of (H, kappa) from prices
experiments     Monte-Carlo and empirical studies, CSV ingestion
cli             command line frontend
"""
