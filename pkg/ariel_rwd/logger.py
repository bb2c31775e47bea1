"""
Logging for ariel-rwd.

The root logger gets a stderr handler and, unless disabled, a handler on
today's file `<log_dir>/YYYY-MM-DD.log`. Both carry the same compact layout

    HHMMSS - INF - simulator.py  - _deliver         :212 - message

and both drop records that do not come from the package, so numpy, scipy or
jinja2 chatter never reaches the log. Result data is never logged.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from datetime import date
from pathlib import Path

PACKAGE = "ariel_rwd"
DAILY_LOG_GLOB = "[0-9][0-9][0-9][0-9]-[0-9][0-9]-[0-9][0-9].log"

_LEVEL_TAGS = {
    logging.CRITICAL: "ERR",
    logging.ERROR: "ERR",
    logging.WARNING: "WRN",
    logging.INFO: "INF",
    logging.DEBUG: "DBG",
}

_CONFIGURED = "_ariel_rwd_logging"


class _PackageFilter(logging.Filter):
    """Keep records emitted by package code, whichever logger they went through."""

    def filter(self, record: logging.LogRecord) -> bool:
        if record.name == "__main__" or record.name.startswith(PACKAGE):
            return True
        # module code logs through the root logger
        return PACKAGE in Path(record.pathname).parts


class _CompactFormatter(logging.Formatter):
    def __init__(self) -> None:
        super().__init__(fmt="%(asctime)s - %(tag)s - %(origin)s - %(message)s", datefmt="%H%M%S")

    def format(self, record: logging.LogRecord) -> str:
        record.tag = _LEVEL_TAGS.get(record.levelno, record.levelname[:3].upper())
        source = Path(record.pathname).name[:12]
        function = (record.funcName or "")[:16]
        record.origin = f"{source:<12} - {function:<16}:{record.lineno}"
        return super().format(record)


@dataclass
class ProjectLogger:
    """
    Root-logger setup for one process.

    Attributes:
        log_dir: Folder of the daily files, relative to `base`; None logs to
            stderr only
        keep: Daily files kept after pruning
        level: Threshold for both handlers
        base: Folder `log_dir` is resolved against (default: the cwd)
    """

    log_dir: str | None = "log"
    keep: int = 7
    level: int = logging.INFO
    base: Path | None = None

    def init(self) -> logging.Logger:
        root = logging.getLogger()
        root.setLevel(self.level)
        if getattr(root, _CONFIGURED, False):
            for handler in root.handlers:
                handler.setLevel(self.level)
            return root

        _close_handlers(root)
        self._attach(root, logging.StreamHandler(sys.stderr))

        if self.log_dir:
            folder = (self.base or Path.cwd()) / self.log_dir
            try:
                folder.mkdir(parents=True, exist_ok=True)
                self._attach(root, logging.FileHandler(folder / f"{date.today():%Y-%m-%d}.log", encoding="utf-8", delay=True))
            except OSError as e:
                logging.warning(f"File logging disabled, {folder} is not writable: {e}")
            else:
                self.prune(folder)

        setattr(root, _CONFIGURED, True)
        logging.debug(f"Logging at {logging.getLevelName(self.level)}, files in {self.log_dir or '(none)'}")
        return root

    def prune(self, folder: Path) -> list[Path]:
        """Delete all but the newest `keep` daily files; returns the deleted paths."""
        stale = sorted(folder.glob(DAILY_LOG_GLOB), reverse=True)[self.keep:]
        removed = []
        for path in stale:
            try:
                path.unlink()
                removed.append(path)
            except OSError:
                pass
        return removed

    def _attach(self, root: logging.Logger, handler: logging.Handler) -> None:
        handler.setLevel(self.level)
        handler.setFormatter(_CompactFormatter())
        handler.addFilter(_PackageFilter())
        root.addHandler(handler)


def _close_handlers(root: logging.Logger) -> None:
    for handler in list(root.handlers):
        try:
            handler.close()
        except Exception:
            pass
        root.removeHandler(handler)


def parse_level(name: str | int | None, default: int = logging.INFO) -> int:
    """Level number for a name such as "debug"; unknown names give `default`."""
    if name is None:
        return default
    if isinstance(name, int):
        return name
    value = logging.getLevelName(str(name).upper())
    return value if isinstance(value, int) else default


def setup_logging(level: int = logging.INFO, log_dir: str | None = "log", keep: int = 7) -> logging.Logger:
    """
    Configure the root logger for a command run.

    Args:
        level: Logging level
        log_dir: Folder of the daily log files, relative to the cwd; None for stderr only
        keep: Number of daily log files to keep

    Returns:
        The root logger
    """
    return ProjectLogger(log_dir=log_dir, keep=keep, level=level).init()


def shutdown_logging() -> None:
    """Close and detach every root handler so log files are released."""
    root = logging.getLogger()
    _close_handlers(root)
    if hasattr(root, _CONFIGURED):
        delattr(root, _CONFIGURED)
