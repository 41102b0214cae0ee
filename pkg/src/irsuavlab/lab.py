from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, List, Optional, Union

# Config & builders
from irsuavlab.agents.base import AgentBase
from irsuavlab.agents.factory import make_agent
from irsuavlab.config.loader import ExperimentConfig, load_config
# Engine & runtime
from irsuavlab.env import UavEnv
from irsuavlab.exceptions import CheckpointMismatchError
from irsuavlab.runtime.engine import Engine
from irsuavlab.runtime.state import RngStreams, RunState
# Persistence
from irsuavlab.persistence.checkpoints.text import check_specs, load_agent
from irsuavlab.persistence.store import RunStore
from irsuavlab.types import EpisodeRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]


# ---------- Public types ----------
@dataclass(frozen=True)
class LabStatus:
    algo: str
    out_dir: str
    episodes_done: int
    global_step: int
    learn_steps: int
    last_reward: Optional[float]
    mean_reward: Optional[float]  # trailing mean over `smoothing_window` episodes
    eval_reward: Optional[float]


# ---------- Public API ----------
class Lab:
    """
    Thin façade over the runtime. Owns one run directory.
    """

    def __init__(self, cfg: Union[ExperimentConfig, PathLike, dict], *, out_dir: Optional[PathLike] = None):
        self.cfg: ExperimentConfig = load_config(cfg)
        self.out_dir = Path(out_dir) if out_dir is not None else Path(self.cfg.out_dir)

        self.state = RunState.create(self.cfg.seed)
        self.agent: AgentBase = make_agent(self.cfg, self.state.streams.init)
        self.env = UavEnv.from_config(self.cfg, self.cfg.phase_strategy_for(), rng=self.state.streams.env)
        self.store = RunStore(self.out_dir)
        self.engine = Engine(
            cfg=self.cfg,
            agent=self.agent,
            env=self.env,
            store=self.store,
            state=self.state,
        )

    # -------- lifecycle --------
    def train(self, *, on_episode: Optional[Callable[[EpisodeRecord], None]] = None) -> List[EpisodeRecord]:
        """Run `N_eps` training episodes into the run directory."""
        self.store.save_config(self.cfg)
        logger.info("Training %s for %d episodes (seed=%d) -> %s", self.agent.algo, self.cfg.episodes, self.cfg.seed, self.out_dir)
        return self.engine.train(on_episode=on_episode)

    def load_checkpoint(self, path: PathLike) -> None:
        algo, nets, steps = load_agent(path)
        if algo != self.agent.algo:
            raise CheckpointMismatchError(f"checkpoint {path} holds a {algo} agent, configuration runs {self.agent.algo}")
        check_specs(self.agent.networks(), nets)
        self.agent.load_networks(nets, steps=steps)
        logger.info("Loaded %s checkpoint from %s (steps=%d)", algo, path, steps)

    def evaluate(self, checkpoint: Optional[PathLike] = None, *, episodes: Optional[int] = None) -> List[EpisodeRecord]:
        """Greedy-policy episodes; every call starts from the same random streams.

        Greedy and Random need no checkpoint. Without one, a learning agent is
        evaluated with whatever weights it currently holds.
        """
        if checkpoint is not None:
            self.load_checkpoint(checkpoint)
        self.store.save_config(self.cfg)
        streams = RngStreams.from_seed(self.cfg.seed)
        self.state.streams = streams
        self.env.rng = streams.env
        self.state.eval_episode = 0
        self.state.eval_records = []
        return self.engine.evaluate(episodes if episodes is not None else self.cfg.eval_episodes)

    def close(self) -> None:
        self.store.close()

    def __enter__(self) -> "Lab":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    # -------- introspection --------
    @property
    def status(self) -> LabStatus:
        st = self.state
        last = st.records[-1]["accumulated_reward"] if st.records else None
        mean = st.recent_mean_reward(self.cfg.smoothing_window) if st.records else None
        ev = st.eval_records[-1]["accumulated_reward"] if st.eval_records else None
        return LabStatus(
            algo=self.agent.algo,
            out_dir=str(self.out_dir),
            episodes_done=st.episode,
            global_step=st.global_step,
            learn_steps=st.learn_steps,
            last_reward=last,
            mean_reward=mean,
            eval_reward=ev,
        )
