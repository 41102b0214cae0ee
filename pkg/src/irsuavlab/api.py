from __future__ import annotations

"""Python API entry points for irsuavlab.

Public helpers:
  - train(config, *, out_dir=None, on_episode=None, **overrides) -> tuple[Lab, LabStatus]
  - evaluate(config, *, checkpoint=None, out_dir=None, episodes=None, **overrides) -> list[EpisodeRecord]
  - export(run_dir, *, window=None, out_dir=None) -> dict[str, Path]
  - compare(config, *, checkpoints=None, out_dir, seeds=None) -> list[ComparisonRow]
  - validate(path) -> list[str]
"""

import csv
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import yaml

from irsuavlab.config.loader import ExperimentConfig, load_config, read_document
from irsuavlab.config.validate import validate_config_dict
from irsuavlab.curves import DEFAULT_WINDOW, export_curves
from irsuavlab.lab import Lab, LabStatus
from irsuavlab.persistence.metrics.csv import format_value
from irsuavlab.presets import resolve
from irsuavlab.types import ComparisonRow, EpisodeRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]
ConfigSource = Union[PathLike, Dict[str, Any], ExperimentConfig]

BASELINES = ("greedy", "random")
COMPARISON_FIELDS = ("algo", "seed", "ts_count", "overall_reward", "final_fairness", "sum_rate")


def _prepare(config: ConfigSource, overrides: Dict[str, Any]) -> ExperimentConfig:
    cfg = load_config(config)
    given = {k: v for k, v in overrides.items() if v is not None}
    return cfg.with_overrides(**given) if given else cfg


def train(
    config: ConfigSource,
    *,
    out_dir: Optional[PathLike] = None,
    on_episode: Optional[Callable[[EpisodeRecord], None]] = None,
    **overrides: Any,
) -> Tuple[Lab, LabStatus]:
    """Convenience: build a Lab and run its full training loop.

    Args:
        config: YAML / flat file path, dict, or a validated ExperimentConfig.
        out_dir: run directory; defaults to the config's `out_dir`.
        overrides: config keys (field names or aliases) applied on top, e.g. ``algo="ddpg"``.
            None values are ignored so CLI options can be passed straight through.
    """
    cfg = _prepare(config, overrides)
    with Lab(cfg, out_dir=out_dir) as lab:
        lab.train(on_episode=on_episode)
        return lab, lab.status


def evaluate(
    config: ConfigSource,
    *,
    checkpoint: Optional[PathLike] = None,
    out_dir: Optional[PathLike] = None,
    episodes: Optional[int] = None,
    **overrides: Any,
) -> List[EpisodeRecord]:
    cfg = _prepare(config, overrides)
    with Lab(cfg, out_dir=out_dir) as lab:
        return lab.evaluate(checkpoint, episodes=episodes)


def export(
    run_dir: PathLike,
    *,
    window: Optional[int] = None,
    out_dir: Optional[PathLike] = None,
) -> Dict[str, Path]:
    """Write curve tables for a run; the window defaults to the run's `smoothing_window`."""
    if window is None:
        window = DEFAULT_WINDOW
        snapshot = Path(run_dir) / "config.yaml"
        if snapshot.is_file():
            doc = yaml.safe_load(snapshot.read_text(encoding="utf-8")) or {}
            window = int(doc.get("smoothing_window", DEFAULT_WINDOW))
    return export_curves(run_dir, window=window, out_dir=out_dir)


def compare(
    config: ConfigSource,
    *,
    checkpoints: Optional[Mapping[str, PathLike]] = None,
    out_dir: PathLike,
    seeds: Optional[Sequence[int]] = None,
) -> List[ComparisonRow]:
    """Evaluate Greedy, Random and any trained agents on one scene.

    `checkpoints` maps an algorithm name (``dqn`` / ``ddpg``) to an agent checkpoint
    directory. Every algorithm is evaluated once per seed under ``out_dir/<algo>/seed_<n>``;
    the rows are also written to ``out_dir/comparison.tsv``.
    """
    base = load_config(config)
    root = Path(out_dir)
    plan: List[Tuple[str, Optional[PathLike]]] = [(a, None) for a in BASELINES]
    plan += [(algo, path) for algo, path in (checkpoints or {}).items()]

    rows: List[ComparisonRow] = []
    for algo, checkpoint in plan:
        for seed in seeds if seeds is not None else (base.seed,):
            cfg = base.with_overrides(algo=algo, seed=seed)
            for rec in evaluate(cfg, checkpoint=checkpoint, out_dir=root / algo / f"seed_{seed}", episodes=1):
                rows.append(
                    {
                        "algo": algo,
                        "seed": seed,
                        "ts_count": rec["ts_count"],
                        "overall_reward": rec["accumulated_reward"],
                        "final_fairness": rec["final_fairness"],
                        "sum_rate": rec["sum_rate"],
                    }
                )

    root.mkdir(parents=True, exist_ok=True)
    table = root / "comparison.tsv"
    with table.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        writer.writerow(COMPARISON_FIELDS)
        for row in rows:
            writer.writerow([format_value(row[k]) for k in COMPARISON_FIELDS])  # type: ignore[literal-required]
    logger.info("Wrote %d comparison rows -> %s", len(rows), table)
    return rows


def validate(path: PathLike) -> List[str]:
    """Lint warnings for a config file; raises `ConfigError` when it does not load."""
    resolved = Path(resolve(str(path)))
    doc, _ = read_document(resolved)
    warnings = validate_config_dict(doc)
    load_config(resolved)
    return warnings
