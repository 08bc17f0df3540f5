# *******************************************************************************
# Copyright (c) 2025 Contributors to the fractal-trading-frequency project
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
import logging

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "src.fractal_trading"

logger = logging.getLogger(__name__)


def setup_logging(verbosity: int = 0) -> None:
    """
    Route package logs to stderr through rich, so stdout and data files stay clean.
    0 -> WARNING, 1 -> INFO, 2+ -> DEBUG.
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    package_logger.handlers.clear()
    package_logger.addHandler(
        RichHandler(
            console=Console(stderr=True),
            show_path=False,
            show_time=verbosity >= 2,
            markup=False,
        )
    )
    package_logger.setLevel(level)
    package_logger.propagate = False


class RunLogger:
    """
    Collects the soft anomalies of one pipeline run (non-unimodal curves,
    solver fallbacks, ...). They are logged as they occur and also kept so the
    run can report them in its output diagnostics.
    """

    def __init__(self, log: logging.Logger, prefix: str):
        self._log = log
        self._prefix = prefix
        self._info_count = 0
        self._warning_count = 0
        self._notes: list[str] = []

    def _message(self, msg: str, context: str | None) -> str:
        where = f"{self._prefix}[{context}]" if context else self._prefix
        return f"{where}: {msg}"

    def info(self, msg: str, context: str | None = None):
        full_msg = self._message(msg, context)
        self._log.info(full_msg)
        self._notes.append(full_msg)
        self._info_count += 1

    def warning(self, msg: str, context: str | None = None):
        full_msg = self._message(msg, context)
        self._log.warning(full_msg)
        self._notes.append(full_msg)
        self._warning_count += 1

    @property
    def warnings(self) -> int:
        return self._warning_count

    @property
    def infos(self) -> int:
        return self._info_count

    @property
    def diagnostics(self) -> list[str]:
        return list(self._notes)

    def flush_summary(self):
        """Log one summary line once the run is over."""

        def make_header_line(text: str, width: int = 80) -> str:
            text = f" {text} "
            return text.center(width, "=")

        if not self._notes:
            return
        logger.info(
            make_header_line(
                f"{self._prefix}: {self._warning_count} warnings, "
                f"{self._info_count} notes"
            )
        )
