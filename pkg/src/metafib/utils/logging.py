"""Logging setup: JSON lines or human-readable records on stderr."""

from __future__ import annotations

import json
import logging
import sys
from datetime import UTC, datetime
from typing import Any

import numpy as np

from metafib.config.settings import LoggingSettings

_RESERVED_LOG_RECORD_KEYS: frozenset[str] = frozenset(
    logging.LogRecord("", 0, "", 0, "", None, None).__dict__,
) | {"asctime", "message"}


def _extras(record: logging.LogRecord) -> dict[str, Any]:
    return {
        key: _safe_json_value(value)
        for key, value in record.__dict__.items()
        if key not in _RESERVED_LOG_RECORD_KEYS and not key.startswith("_")
    }


def _safe_json_value(value: object) -> Any:
    """Coerce a value to something JSON-serializable.

    Numpy scalars and arrays become Python ints/floats/lists; anything else that
    json cannot encode becomes its string representation.

    Args:
        value: Value to serialize.

    Returns:
        A JSON-serializable value.
    """
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    try:
        json.dumps(value)
        return value
    except TypeError:
        return str(value)


class JsonLogFormatter(logging.Formatter):
    """Formatter that emits one JSON object per log record."""

    def format(self, record: logging.LogRecord) -> str:
        """Format a log record as JSON.

        Args:
            record: Log record to format.

        Returns:
            JSON string representation.
        """
        payload: dict[str, Any] = {
            "ts": datetime.now(tz=UTC).isoformat(timespec="milliseconds"),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }

        payload.update(_extras(record))

        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)

        return json.dumps(payload, ensure_ascii=False)


class HumanLogFormatter(logging.Formatter):
    """Single-line formatter that appends `extra` fields as sorted key=value pairs."""

    def __init__(self) -> None:
        super().__init__(
            fmt="%(asctime)s %(levelname)s %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        extras = _extras(record)
        if not extras:
            return line
        pairs = " ".join(f"{key}={json.dumps(extras[key])}" for key in sorted(extras))
        head, sep, tail = line.partition("\n")
        return f"{head} {pairs}{sep}{tail}"


def configure_logging(*, settings: LoggingSettings) -> None:
    """Install a single stderr handler; stdout stays reserved for reports and data.

    Args:
        settings: Logging settings (level and JSON/human output).
    """
    level_name = settings.level.strip().upper()
    level = logging.getLevelNamesMapping().get(level_name, logging.WARNING)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)

    handler.setFormatter(JsonLogFormatter() if settings.json_logs else HumanLogFormatter())

    logging.basicConfig(level=level, handlers=[handler], force=True)
