"""
Logging configuration for the library and the command line.

Records are JSON lines on standard error; standard output is reserved for reports.
Structured fields may carry scalars, algebra elements, enums, bidegree tuples and
tables keyed by bidegree: they are converted to plain JSON before formatting.
"""

import json
import logging
import logging.handlers
import sys
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from ddbar.core.config import settings

MAX_BYTES = 10 * 1024 * 1024
BACKUP_COUNT = 5


def log_value(value: Any) -> Any:
    """Plain JSON form of a structured log field"""
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "to_text"):
        return value.to_text()
    if isinstance(value, dict):
        return {_log_key(k): log_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [log_value(v) for v in items]
    return str(value)


def _log_key(key: Any) -> str:
    # bidegree keys render as "p,q"
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(log_value(key))


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record: logging.LogRecord) -> str:
        log_entry: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        # Add extra fields
        if hasattr(record, "extra_fields"):
            log_entry.update(record.extra_fields)

        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str, ensure_ascii=False)


def _rotating(path: Path, level: int = logging.NOTSET) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(path, maxBytes=MAX_BYTES, backupCount=BACKUP_COUNT)
    handler.setLevel(level)
    handler.setFormatter(JSONFormatter())
    return handler


def setup_logging(level: Optional[str] = None) -> None:
    """Configure the root logger; ``level`` overrides DDBAR_LOG_LEVEL"""
    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, (level or settings.LOG_LEVEL).upper()))

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    if settings.DEBUG:
        console_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    else:
        console_handler.setFormatter(JSONFormatter())
    root_logger.addHandler(console_handler)

    if settings.LOG_TO_FILE:
        log_dir = Path(settings.LOG_DIR)
        log_dir.mkdir(parents=True, exist_ok=True)
        root_logger.addHandler(_rotating(log_dir / "ddbar.log"))
        root_logger.addHandler(_rotating(log_dir / "error.log", logging.ERROR))


class LoggerMixin:
    """Mixin to add logging capabilities to classes"""

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(self.__class__.__name__)

    def _log(self, level: int, message: str, fields: Dict[str, Any]) -> None:
        if not self.logger.isEnabledFor(level):
            return
        extra = {"extra_fields": {k: log_value(v) for k, v in fields.items()}} if fields else {}
        self.logger.log(level, message, extra=extra, stacklevel=3)

    def log_info(self, message: str, /, **kwargs):
        """Log info message with extra fields"""
        self._log(logging.INFO, message, kwargs)

    def log_error(self, message: str, /, **kwargs):
        self._log(logging.ERROR, message, kwargs)

    def log_warning(self, message: str, /, **kwargs):
        self._log(logging.WARNING, message, kwargs)

    def log_debug(self, message: str, /, **kwargs):
        self._log(logging.DEBUG, message, kwargs)
