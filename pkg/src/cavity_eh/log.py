"""
Logging setup driven by LoggingConfig.

Text output goes through rich's RichHandler; the json format emits one
JSON object per record. Modules obtain loggers with
``logging.getLogger(__name__)`` and never configure handlers themselves.
"""

import json
import logging
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler

from cavity_eh.models import LoggingConfig

PACKAGE_LOGGER = "cavity_eh"

_installed: List[logging.Handler] = []


class JsonFormatter(logging.Formatter):
    """Render a log record as a single JSON line."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "time": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


def configure_logging(config: Optional[LoggingConfig] = None) -> logging.Logger:
    """
    Install handlers on the package logger.

    Calling it again replaces the handlers installed by the previous call.

    Args:
        config: Logging configuration (defaults to LoggingConfig())

    Returns:
        The package logger

    Examples:
        >>> logger = configure_logging(LoggingConfig(level="DEBUG"))
        >>> logger.name
        'cavity_eh'
    """
    config = config or LoggingConfig()
    logger = logging.getLogger(PACKAGE_LOGGER)

    for handler in _installed:
        logger.removeHandler(handler)
        handler.close()
    _installed.clear()

    if config.format == "json":
        handler: logging.Handler = logging.StreamHandler()
        handler.setFormatter(JsonFormatter())
    else:
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
        )
        handler.setFormatter(logging.Formatter("%(message)s"))
    _installed.append(handler)

    if config.file:
        file_handler = logging.FileHandler(config.file, encoding="utf-8")
        if config.format == "json":
            file_handler.setFormatter(JsonFormatter())
        else:
            file_handler.setFormatter(
                logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
            )
        _installed.append(file_handler)

    for h in _installed:
        logger.addHandler(h)
    logger.setLevel(config.level)
    logger.propagate = False
    return logger
