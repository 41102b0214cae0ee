"""Deep Q-network agent over the discrete flight table."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from irsuavlab.agents.actions import DiscreteActionTable
from irsuavlab.agents.base import AgentBase, Decision, LearnResult
from irsuavlab.exceptions import NetworkShapeError, NonFiniteError
from irsuavlab.neural import (
    AdamConfig,
    NetworkParams,
    adam_step,
    backward,
    dense_stack,
    forward,
    init,
    predict,
    soft_update,
)

if TYPE_CHECKING:
    from irsuavlab.env import UavEnv
    from irsuavlab.replay import Batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DqnSettings:
    """epsilon is the EXPLOIT probability: 0.9 picks the argmax 90% of the time."""

    epsilon: float = 0.9
    gamma: float = 0.99
    target_update_period: Optional[int] = 200  # None disables target syncs
    adam: AdamConfig = field(default_factory=lambda: AdamConfig(learning_rate=1e-5))

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.target_update_period is not None and self.target_update_period < 1:
            raise ValueError("target_update_period must be >= 1")


class DqnAgent(AgentBase):
    algo = "dqn"
    learns = True

    def __init__(
        self,
        table: DiscreteActionTable,
        evaluation: NetworkParams,
        settings: DqnSettings = DqnSettings(),
        *,
        target: Optional[NetworkParams] = None,
    ) -> None:
        super().__init__()
        if evaluation.output_width != len(table):
            raise NetworkShapeError(
                f"Q-network has {evaluation.output_width} outputs for {len(table)} actions"
            )
        self.table = table
        self.settings = settings
        self.evaluation = evaluation
        self.target = target if target is not None else evaluation.copy()
        if self.target.specs != self.evaluation.specs:
            raise NetworkShapeError("target and evaluation networks differ in shape")

    @classmethod
    def build(
        cls,
        table: DiscreteActionTable,
        hidden: Sequence[int],
        settings: DqnSettings,
        rng: np.random.Generator,
        *,
        obs_width: int = 3,
    ) -> "DqnAgent":
        specs = dense_stack(obs_width, hidden, len(table), output_activation="identity")
        return cls(table, init(specs, rng), settings)

    # ----- Acting -------------------------------------------------------
    def q_values(self, obs: NDArray[np.float64]) -> NDArray[np.float64]:
        return predict(self.evaluation, obs)

    def select(self, obs: NDArray[np.float64], rng: np.random.Generator, *, explore: bool = True) -> int:
        """Argmax with probability epsilon (always when not exploring), else uniform."""
        if not explore or rng.random() < self.settings.epsilon:
            return int(np.argmax(self.q_values(obs)))
        return int(rng.integers(len(self.table)))

    def act(
        self,
        obs: NDArray[np.float64],
        env: "UavEnv",
        rng: np.random.Generator,
        *,
        explore: bool,
    ) -> Decision:
        idx = self.select(obs, rng, explore=explore)
        return Decision(self.table[idx], np.array([float(idx)]), idx)

    # ----- Learning -----------------------------------------------------
    def td_targets(self, batch: "Batch") -> NDArray[np.float64]:
        """y = r + gamma * max_a' Q_target(s', a'); y = r on terminal transitions."""
        q_next = predict(self.target, batch.next_obs).max(axis=1)
        return batch.rewards + self.settings.gamma * q_next * (~batch.terminals)

    def learn(self, batch: "Batch") -> LearnResult:
        """One Adam step on the mean squared TD error; returns the pre-step loss."""
        n = len(batch)
        if n == 0:
            raise ValueError("cannot learn from an empty batch")
        y = self.td_targets(batch)
        q, cache = forward(self.evaluation, batch.obs)
        rows = np.arange(n)
        idx = batch.actions[:, 0].astype(np.int64)
        diff = q[rows, idx] - y
        loss = float(np.mean(diff * diff))
        if not np.isfinite(loss):
            raise NonFiniteError(f"non-finite DQN loss: {loss}")

        grad_out = np.zeros_like(q)
        grad_out[rows, idx] = 2.0 * diff / n
        adam_step(self.evaluation, backward(self.evaluation, cache, grad_out), self.settings.adam)

        self.steps += 1
        period = self.settings.target_update_period
        if period is not None and self.steps % period == 0:
            soft_update(self.target, self.evaluation, 1.0)
            logger.debug("target network synced at learn step %d", self.steps)
        return LearnResult(loss=loss)

    # ----- Checkpoint hooks ---------------------------------------------
    def networks(self) -> Dict[str, NetworkParams]:
        return {"evaluation": self.evaluation, "target": self.target}

    def load_networks(self, nets: Dict[str, NetworkParams], *, steps: int = 0) -> None:
        for name in ("evaluation", "target"):
            if nets[name].specs != self.evaluation.specs:
                raise NetworkShapeError(f"{name} network does not match the configured layers")
        self.evaluation = nets["evaluation"]
        self.target = nets["target"]
        self.steps = steps
