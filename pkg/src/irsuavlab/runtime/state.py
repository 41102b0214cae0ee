from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from irsuavlab.types import EpisodeRecord


# --------------------------------- Streams ----------------------------------
@dataclass
class RngStreams:
    """Independent generators split from one seed.

    - `init`: network weights
    - `exploration`: epsilon draws, DDPG noise, Random agent choices
    - `replay`: mini-batch indices
    - `env`: random IRS phases
    Changing the batch size only shifts `replay`, never the trajectories.
    """

    seed: int
    init: np.random.Generator
    exploration: np.random.Generator
    replay: np.random.Generator
    env: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RngStreams":
        init, exploration, replay, env = (
            np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(4)
        )
        return cls(seed=seed, init=init, exploration=exploration, replay=replay, env=env)


# --------------------------------- State ------------------------------------
@dataclass
class RunState:
    """Counters and per-episode summaries of one run."""

    streams: RngStreams
    episode: int = 0
    global_step: int = 0
    learn_steps: int = 0
    learning_started: bool = False
    eval_episode: int = 0
    records: List[EpisodeRecord] = field(default_factory=list)
    eval_records: List[EpisodeRecord] = field(default_factory=list)

    @classmethod
    def create(cls, seed: int) -> "RunState":
        return cls(streams=RngStreams.from_seed(seed))

    def recent_mean_reward(self, window: int) -> float:
        recent = self.records[-window:]
        if not recent:
            return float("nan")
        return float(np.mean([r["accumulated_reward"] for r in recent]))
