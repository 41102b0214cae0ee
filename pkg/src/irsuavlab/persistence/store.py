from __future__ import annotations

"""Run-directory facade combining metric CSVs, the config snapshot and checkpoints.

Layout under `out_dir`:

    config.yaml
    episodes.csv, steps.csv              training
    eval_episodes.csv, eval_steps.csv    evaluation
    checkpoints/episode_000100/, checkpoints/final/
    curves/                              written by `irsuavlab.curves`
"""

import logging
import os
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Literal, Mapping, Optional, Tuple, Union

from irsuavlab.neural import NetworkParams

from .checkpoints.text import load_agent, save_agent
from .metrics.csv import EPISODE_FIELDS, STEP_FIELDS, MetricsWriter

if TYPE_CHECKING:
    from irsuavlab.config.loader import ExperimentConfig

logger = logging.getLogger(__name__)

Phase = Literal["train", "eval"]


class RunStore:
    def __init__(self, out_dir: Union[str, "os.PathLike[str]"]) -> None:
        self.root = Path(out_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        self._writers: Dict[Tuple[Phase, str], MetricsWriter] = {}

    # ----------------------------- Paths -----------------------------
    @property
    def checkpoints_dir(self) -> Path:
        return self.root / "checkpoints"

    @property
    def curves_dir(self) -> Path:
        return self.root / "curves"

    def metrics_path(self, phase: Phase, kind: str) -> Path:
        prefix = "" if phase == "train" else "eval_"
        return self.root / f"{prefix}{kind}.csv"

    def checkpoint_path(self, episode: Optional[int] = None) -> Path:
        name = "final" if episode is None else f"episode_{episode:06d}"
        return self.checkpoints_dir / name

    # ----------------------------- Config -----------------------------
    def save_config(self, cfg: "ExperimentConfig") -> Path:
        from irsuavlab.config.loader import save_config

        path = self.root / "config.yaml"
        save_config(cfg, path)
        return path

    # ----------------------------- Metrics -----------------------------
    def open_metrics(self, phase: Phase) -> None:
        """(Re)create the episode and step CSVs for a phase."""
        self.close_metrics(phase)
        self._writers[(phase, "episodes")] = MetricsWriter(
            self.metrics_path(phase, "episodes"), "episodes" if phase == "train" else "eval_episodes", EPISODE_FIELDS
        )
        self._writers[(phase, "steps")] = MetricsWriter(
            self.metrics_path(phase, "steps"), "steps" if phase == "train" else "eval_steps", STEP_FIELDS
        )

    def write_step(self, phase: Phase, row: Mapping[str, Any]) -> None:
        self._writer(phase, "steps").write(row)

    def write_episode(self, phase: Phase, row: Mapping[str, Any]) -> None:
        self._writer(phase, "episodes").write(row)
        self._writer(phase, "steps").flush()
        self._writer(phase, "episodes").flush()

    def _writer(self, phase: Phase, kind: str) -> MetricsWriter:
        if (phase, kind) not in self._writers:
            self.open_metrics(phase)
        return self._writers[(phase, kind)]

    def close_metrics(self, phase: Optional[Phase] = None) -> None:
        for key in list(self._writers):
            if phase is None or key[0] == phase:
                self._writers.pop(key).close()

    # ----------------------------- Checkpoint API -----------------------------
    def save_checkpoint(
        self,
        algo: str,
        networks: Dict[str, NetworkParams],
        *,
        steps: int,
        episode: Optional[int] = None,
    ) -> Path:
        path = save_agent(self.checkpoint_path(episode), algo, networks, steps=steps, episode=episode)
        logger.info("Saved %s checkpoint to %s", algo, path)
        return path

    def load_checkpoint(self, episode: Optional[int] = None) -> Tuple[str, Dict[str, NetworkParams], int]:
        return load_agent(self.checkpoint_path(episode))

    # ----------------------------- Lifecycle -----------------------------
    def close(self) -> None:
        self.close_metrics()

    def __enter__(self) -> "RunStore":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()
