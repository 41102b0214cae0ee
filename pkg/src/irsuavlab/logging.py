# Run logging & JSON-lines trace events
from __future__ import annotations

import itertools
import json
import logging
import math
from pathlib import Path
from typing import Any, Optional

import numpy as np

DEFAULT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
TRACE_LOGGER = "irsuavlab.trace"

_seq = itertools.count(1)


def _coerce_level(value: Any) -> int:
    if isinstance(value, int):
        return value
    level = logging.getLevelName(str(value).upper())
    return level if isinstance(level, int) else logging.INFO


def _open_handler(path: str) -> logging.FileHandler:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return logging.FileHandler(path, encoding="utf-8")


def setup_logging(
    level: str | int = "INFO",
    log_file: Optional[str] = None,
    trace_file: Optional[str] = None,
    *,
    fmt: str = DEFAULT_FORMAT,
) -> None:
    """Configure the root logger and the trace logger for one run.

    Args:
        level: root log level name or number; unknown names fall back to INFO
        log_file: human-readable log file; stderr when missing
        trace_file: JSON-lines event file; tracing is off when missing
        fmt: record format of the human-readable log
    """
    handlers = [_open_handler(log_file)] if log_file else None
    logging.basicConfig(level=_coerce_level(level), format=fmt, handlers=handlers, force=True)

    tracer = logging.getLogger(TRACE_LOGGER)
    tracer.propagate = False
    for old in tracer.handlers:
        old.close()
    tracer.handlers = []
    if not trace_file:
        tracer.disabled = True
        return
    fh = _open_handler(trace_file)
    fh.setFormatter(logging.Formatter("%(message)s"))
    tracer.addHandler(fh)
    tracer.setLevel(logging.INFO)
    tracer.disabled = False


def _plain(value: Any) -> Any:
    """numpy scalars/arrays to Python; NaN and infinities to None (strict JSON)."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def emit_trace(event: str, **fields: Any) -> None:
    """Write one numbered event row to the `irsuavlab.trace` logger.

    Example:
        emit_trace("episode_end", algo="dqn", episode=12, accumulated_reward=3.25, mean_loss=float("nan"))
        -> {"seq": 7, "event": "episode_end", "algo": "dqn", ..., "mean_loss": null}
    """
    tracer = logging.getLogger(TRACE_LOGGER)
    if tracer.disabled:
        return
    row = {"seq": next(_seq), "event": event, **{k: _plain(v) for k, v in fields.items()}}
    tracer.info(json.dumps(row, ensure_ascii=False, allow_nan=False, default=str))
