from __future__ import annotations

import logging
import math
import time
from typing import Callable, List, Literal, Optional

from irsuavlab.agents.base import AgentBase
from irsuavlab.config.loader import ExperimentConfig
from irsuavlab.env import UavEnv
from irsuavlab.exceptions import NonFiniteError, TrainingAbortedError
from irsuavlab.logging import emit_trace
from irsuavlab.persistence.store import RunStore
from irsuavlab.replay import ReplayMemory, Transition
from irsuavlab.runtime.state import RunState
from irsuavlab.types import EpisodeRecord, StepRecord

logger = logging.getLogger(__name__)

Phase = Literal["train", "eval"]


class Engine:
    """Episode loop.

    Responsibilities:
      • Reset the environment, ask the agent for one action per TS, step until the
        energy budget is spent.
      • During training, push transitions and run one learn step per TS once replay
        holds a full batch.
      • Write per-TS and per-episode rows through the `RunStore`, checkpoint the
        agent's networks every `checkpoint_every` episodes and at the end.
    """

    def __init__(
        self,
        *,
        cfg: ExperimentConfig,
        agent: AgentBase,
        env: UavEnv,
        store: RunStore,
        state: RunState,
        memory: Optional[ReplayMemory] = None,
    ) -> None:
        self.cfg = cfg
        self.agent = agent
        self.env = env
        self.store = store
        self.state = state
        self.memory = memory if memory is not None else ReplayMemory(cfg.memory_size)

    # ------------------------------------------------------------------
    def run_episode(self, *, learn: bool, explore: bool, phase: Phase = "train") -> EpisodeRecord:
        """Execute one episode and return its summary row."""
        st = self.state
        if phase == "train":
            st.episode += 1
            index = st.episode
        else:
            st.eval_episode += 1
            index = st.eval_episode
        rng = st.streams

        obs = self.env.reset()
        accumulated = 0.0
        sum_rate = 0.0
        violations = 0
        fairness = 0.0
        losses: List[float] = []
        ts = 0

        while not self.env.done:
            decision = self.agent.act(obs, self.env, rng.exploration, explore=explore)
            result = self.env.step(decision.action)
            next_obs = self.env.observe()
            ts = result.state.ts

            if learn and self.agent.learns:
                self.memory.push(Transition.make(obs, decision.stored, result.reward, next_obs, result.done))
                if len(self.memory) >= self.cfg.batch_size:
                    losses.append(self._learn_step(index, ts))

            accumulated += result.reward
            sum_rate += result.served_rate
            violations += int(result.out_of_bounds)
            fairness = result.fairness
            if phase == "train":
                st.global_step += 1

            row: StepRecord = {
                "episode": index,
                "ts": ts,
                "x": result.state.x,
                "y": result.state.y,
                "energy": result.state.energy,
                "served_ue": result.served,
                "rate": result.served_rate,
                "fairness": result.fairness,
                "reward": result.reward,
                "out_of_bounds": int(result.out_of_bounds),
            }
            self.store.write_step(phase, row)
            obs = next_obs

        record: EpisodeRecord = {
            "episode": index,
            "ts_count": ts,
            "accumulated_reward": accumulated,
            "final_fairness": fairness,
            "sum_rate": sum_rate,
            "boundary_violations": violations,
            "mean_loss": float(sum(losses) / len(losses)) if losses else float("nan"),
        }
        self.store.write_episode(phase, record)
        (st.records if phase == "train" else st.eval_records).append(record)
        return record

    def _learn_step(self, episode: int, ts: int) -> float:
        st = self.state
        if not st.learning_started:
            st.learning_started = True
            logger.info("Learning started at global step %d (replay size %d)", st.global_step, len(self.memory))
            emit_trace("learning_started", episode=episode, global_step=st.global_step)
        batch = self.memory.sample(self.cfg.batch_size, st.streams.replay)
        try:
            result = self.agent.learn(batch)
        except NonFiniteError as exc:
            raise TrainingAbortedError(f"episode {episode}, ts {ts}: {exc}") from exc
        if not math.isfinite(result.loss):
            raise TrainingAbortedError(f"episode {episode}, ts {ts}: loss={result.loss}")
        st.learn_steps += 1
        return result.loss

    # ------------------------------------------------------------------
    def train(self, *, on_episode: Optional[Callable[[EpisodeRecord], None]] = None) -> List[EpisodeRecord]:
        """Run N_eps training episodes with exploration and learning."""
        cfg = self.cfg
        self.store.open_metrics("train")
        started = time.time()
        records: List[EpisodeRecord] = []
        try:
            for _ in range(cfg.episodes):
                rec = self.run_episode(learn=True, explore=True, phase="train")
                records.append(rec)
                logger.info(
                    "[%s] episode %d/%d ts=%d reward=%.4f fairness=%.4f oob=%d mean(%d)=%.4f",
                    self.agent.algo, rec["episode"], cfg.episodes, rec["ts_count"],
                    rec["accumulated_reward"], rec["final_fairness"], rec["boundary_violations"],
                    cfg.smoothing_window, self.state.recent_mean_reward(cfg.smoothing_window),
                )
                emit_trace("episode_end", algo=self.agent.algo, **rec)
                if on_episode is not None:
                    on_episode(rec)
                if rec["episode"] % cfg.checkpoint_every == 0:
                    self.checkpoint(rec["episode"])
            self.checkpoint(None)
        finally:
            self.store.close_metrics("train")
        logger.info("Training finished: %d episodes in %.1fs", len(records), time.time() - started)
        return records

    def evaluate(self, episodes: int = 1) -> List[EpisodeRecord]:
        """Greedy-policy episodes: no exploration, no learning."""
        self.store.open_metrics("eval")
        records: List[EpisodeRecord] = []
        try:
            for _ in range(episodes):
                rec = self.run_episode(learn=False, explore=False, phase="eval")
                records.append(rec)
                emit_trace("evaluation_end", algo=self.agent.algo, **rec)
                logger.info(
                    "[%s] evaluation ts=%d reward=%.4f fairness=%.4f sum_rate=%.6g",
                    self.agent.algo, rec["ts_count"], rec["accumulated_reward"],
                    rec["final_fairness"], rec["sum_rate"],
                )
        finally:
            self.store.close_metrics("eval")
        return records

    def checkpoint(self, episode: Optional[int]) -> None:
        nets = self.agent.networks()
        if not nets:
            return
        path = self.store.save_checkpoint(self.agent.algo, nets, steps=self.agent.steps, episode=episode)
        emit_trace("checkpoint_saved", algo=self.agent.algo, episode=episode, path=str(path))
