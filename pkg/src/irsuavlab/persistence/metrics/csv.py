from __future__ import annotations

import csv
import io
import os
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Union

SCHEMA_VERSION = 1

STEP_FIELDS: tuple[str, ...] = (
    "episode", "ts", "x", "y", "energy", "served_ue", "rate", "fairness", "reward", "out_of_bounds",
)
EPISODE_FIELDS: tuple[str, ...] = (
    "episode", "ts_count", "accumulated_reward", "final_fairness", "sum_rate",
    "boundary_violations", "mean_loss",
)


def format_value(value: Any) -> str:
    """Integers verbatim, floats at 17 significant digits, booleans as 0/1."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _parse_value(text: str) -> Union[int, float, str]:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


class MetricsWriter:
    """Append-only CSV writer with a versioned schema comment as its first line.

    Rows are flushed by `flush()` (the engine calls it once per episode).
    """

    def __init__(self, path: Union[str, os.PathLike[str]], kind: str, fields: Sequence[str]) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.kind = kind
        self.fields = tuple(fields)
        self._fh: Optional[io.TextIOWrapper] = self.path.open("w", encoding="utf-8", newline="")
        self._fh.write(f"# schema=irsuavlab.{kind}/{SCHEMA_VERSION}\n")
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(self.fields)
        self.rows = 0

    def write(self, row: Mapping[str, Any]) -> None:
        if self._fh is None:
            raise ValueError(f"{self.path} is closed")
        self._writer.writerow([format_value(row[f]) for f in self.fields])
        self.rows += 1

    def flush(self) -> None:
        if self._fh is not None:
            self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "MetricsWriter":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()


def iter_metrics(path: Union[str, os.PathLike[str]]) -> Iterator[Dict[str, Union[int, float, str]]]:
    """Yield typed rows, skipping `#` comment lines."""
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        lines = (line for line in f if not line.startswith("#"))
        for row in csv.DictReader(lines):
            yield {k: _parse_value(v) for k, v in row.items()}


def read_metrics(path: Union[str, os.PathLike[str]]) -> List[Dict[str, Union[int, float, str]]]:
    return list(iter_metrics(path))


def read_schema(path: Union[str, os.PathLike[str]]) -> Optional[str]:
    with Path(path).open("r", encoding="utf-8") as f:
        first = f.readline().strip()
    return first.split("=", 1)[1] if first.startswith("# schema=") else None
