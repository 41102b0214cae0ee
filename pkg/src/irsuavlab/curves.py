"""Plain-text curve tables derived from a finished run directory.

`export_curves(run_dir)` writes tab-separated tables under ``run_dir/curves``:

- ``reward_vs_episode.tsv``: training reward per episode and its trailing mean
- ``eval_cumulative.tsv``: cumulative reward, fairness and sum rate per evaluation TS
- ``eval_trajectory.tsv``: UAV positions per evaluation TS, for path plots

Rendering is left to whatever plotting tool reads the tables.
"""

from __future__ import annotations

import csv
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from irsuavlab.exceptions import RunDirectoryError
from irsuavlab.persistence.metrics.csv import format_value, read_metrics

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 100


def trailing_mean(values: Sequence[float], window: int) -> np.ndarray:
    """Mean of the last `window` values up to each index (shorter at the start)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    arr = np.asarray(values, dtype=np.float64)
    out = np.empty_like(arr)
    for i in range(arr.shape[0]):
        out[i] = arr[max(0, i - window + 1): i + 1].mean()
    return out


def _write_tsv(path: Path, header: Sequence[str], rows: List[Sequence[Any]]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def _require(path: Path) -> List[Dict[str, Any]]:
    if not path.is_file():
        raise RunDirectoryError(f"missing metrics file: {path}")
    return read_metrics(path)


def export_curves(
    run_dir: Union[str, "os.PathLike[str]"],
    *,
    window: int = DEFAULT_WINDOW,
    out_dir: Optional[Union[str, "os.PathLike[str]"]] = None,
) -> Dict[str, Path]:
    """Write the curve tables and return their paths by name.

    Training curves need ``episodes.csv``; evaluation curves need ``eval_steps.csv``.
    At least one of them must exist.
    """
    root = Path(run_dir)
    target = Path(out_dir) if out_dir is not None else root / "curves"
    episodes_csv = root / "episodes.csv"
    eval_steps_csv = root / "eval_steps.csv"
    if not episodes_csv.is_file() and not eval_steps_csv.is_file():
        raise RunDirectoryError(f"{root} holds neither episodes.csv nor eval_steps.csv")
    target.mkdir(parents=True, exist_ok=True)
    written: Dict[str, Path] = {}

    if episodes_csv.is_file():
        episodes = _require(episodes_csv)
        rewards = [float(r["accumulated_reward"]) for r in episodes]
        smoothed = trailing_mean(rewards, window) if rewards else np.empty(0)
        rows = [
            (r["episode"], r["ts_count"], float(r["accumulated_reward"]), float(s),
             float(r["final_fairness"]), float(r["sum_rate"]))
            for r, s in zip(episodes, smoothed)
        ]
        written["reward_vs_episode"] = _write_tsv(
            target / "reward_vs_episode.tsv",
            ("episode", "ts_count", "accumulated_reward", f"mean_{window}", "final_fairness", "sum_rate"),
            rows,
        )

    if eval_steps_csv.is_file():
        steps = _require(eval_steps_csv)
        cumulative: List[Sequence[Any]] = []
        trajectory: List[Sequence[Any]] = []
        current: Optional[Any] = None
        acc_reward = acc_rate = 0.0
        for s in steps:
            if s["episode"] != current:
                current = s["episode"]
                acc_reward = acc_rate = 0.0
            acc_reward += float(s["reward"])
            acc_rate += float(s["rate"])
            cumulative.append((s["episode"], s["ts"], acc_reward, float(s["fairness"]), acc_rate))
            trajectory.append((s["episode"], s["ts"], float(s["x"]), float(s["y"]), s["served_ue"]))
        written["eval_cumulative"] = _write_tsv(
            target / "eval_cumulative.tsv",
            ("episode", "ts", "cumulative_reward", "fairness", "cumulative_sum_rate"),
            cumulative,
        )
        written["eval_trajectory"] = _write_tsv(
            target / "eval_trajectory.tsv", ("episode", "ts", "x", "y", "served_ue"), trajectory
        )

    for name, path in written.items():
        logger.info("Wrote %s -> %s", name, path)
    return written
