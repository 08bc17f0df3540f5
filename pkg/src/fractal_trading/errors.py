# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""
Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command line frontend
only has to catch FractalTradingError once.
"""


class FractalTradingError(Exception):
    exit_code: int = 1
    kind: str = "error"


class UsageError(FractalTradingError):
    """Bad flags or config keys."""

    exit_code = 2
    kind = "usage"


class DomainError(FractalTradingError, ValueError):
    """A parameter or level lies outside the model's domain."""

    exit_code = 3
    kind = "domain"


class InfeasibleLevelError(DomainError):
    def __init__(self, m: int, lhs: float, rhs: float):
        self.m = m
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"level m={m} is infeasible: T/2^m = {lhs!r} must exceed "
            f"W^m*c0 = {rhs!r}"
        )


class CapabilityError(DomainError):
    """The request is valid but exceeds what the chosen method supports."""


class ContractError(DomainError):
    """The operation was called with inputs of a kind it does not handle."""


class NumericalError(FractalTradingError, ArithmeticError):
    exit_code = 4
    kind = "numerical"


class EmbeddingError(NumericalError):
    def __init__(self, min_eigenvalue: float, n_steps: int, hurst: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"circulant embedding of size {2 * n_steps} for H={hurst} has a negative "
            f"eigenvalue {min_eigenvalue!r}"
        )


class FactorizationError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, msg: str, bracket: tuple[float, float]):
        self.bracket = bracket
        super().__init__(f"{msg} (final bracket [{bracket[0]!r}, {bracket[1]!r}])")


class EstimationError(NumericalError):
    pass


class IngestionError(FractalTradingError, OSError):
    exit_code = 5
    kind = "io"

    def __init__(self, msg: str, file: str | None = None, line: int | None = None):
        self.file = file
        self.line = line
        where = ""
        if file is not None:
            where = f"{file}:{line}: " if line is not None else f"{file}: "
        super().__init__(f"{where}{msg}")
