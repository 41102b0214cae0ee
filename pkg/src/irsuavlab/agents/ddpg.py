"""Deterministic actor-critic agent with continuous flight actions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from irsuavlab.agents.base import AgentBase, Decision, LearnResult
from irsuavlab.env import Action
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

ACTION_WIDTH = 2


@dataclass(frozen=True)
class DdpgSettings:
    gamma: float = 0.99
    tau: float = 0.01
    noise_scale: float = 1.3  # N'
    noise_decay: float = 0.9995  # eta, applied per exploring environment step
    max_distance: float = 40.0
    actor_adam: AdamConfig = field(default_factory=lambda: AdamConfig(learning_rate=1e-4))
    critic_adam: AdamConfig = field(default_factory=lambda: AdamConfig(learning_rate=2e-4))

    def __post_init__(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise ValueError("tau must lie in (0, 1]")
        if not 0.0 < self.noise_decay <= 1.0:
            raise ValueError("noise_decay must lie in (0, 1]")
        if self.noise_scale < 0:
            raise ValueError("noise_scale must be non-negative")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.max_distance <= 0:
            raise ValueError("max_distance must be positive")


def to_action(raw: NDArray[np.float64], max_distance: float) -> Action:
    """Map an actor output in [-1, 1]^2 to (angle, distance).

    angle = (x_mu * π) mod 2π, distance = |x_d| * d_max.
    """
    angle = math.fmod(float(raw[0]) * math.pi, 2.0 * math.pi)
    if angle < 0.0:
        angle += 2.0 * math.pi
    if angle >= 2.0 * math.pi:
        angle = 0.0
    distance = min(abs(float(raw[1])), 1.0) * max_distance
    return Action(angle=angle, distance=distance)


class DdpgAgent(AgentBase):
    algo = "ddpg"
    learns = True

    def __init__(
        self,
        actor: NetworkParams,
        critic: NetworkParams,
        settings: DdpgSettings = DdpgSettings(),
        *,
        target_actor: Optional[NetworkParams] = None,
        target_critic: Optional[NetworkParams] = None,
    ) -> None:
        super().__init__()
        if actor.output_width != ACTION_WIDTH:
            raise NetworkShapeError(f"actor must emit {ACTION_WIDTH} values")
        if critic.input_width != actor.input_width + ACTION_WIDTH or critic.output_width != 1:
            raise NetworkShapeError("critic must map (observation, action) to one value")
        self.settings = settings
        self.actor = actor
        self.critic = critic
        self.target_actor = target_actor if target_actor is not None else actor.copy()
        self.target_critic = target_critic if target_critic is not None else critic.copy()

    @classmethod
    def build(
        cls,
        actor_hidden: Sequence[int],
        critic_hidden: Sequence[int],
        settings: DdpgSettings,
        rng: np.random.Generator,
        *,
        obs_width: int = 3,
    ) -> "DdpgAgent":
        actor = init(dense_stack(obs_width, actor_hidden, ACTION_WIDTH, output_activation="tanh"), rng)
        critic = init(dense_stack(obs_width + ACTION_WIDTH, critic_hidden, 1), rng)
        return cls(actor, critic, settings)

    @property
    def obs_width(self) -> int:
        return self.actor.input_width

    @property
    def noise_std(self) -> float:
        """N' * eta^steps, the exploration noise for the next exploring step."""
        return self.settings.noise_scale * self.settings.noise_decay**self.steps

    # ----- Acting -------------------------------------------------------
    def select(self, obs: NDArray[np.float64], rng: np.random.Generator, *, explore: bool = True) -> NDArray[np.float64]:
        """Raw actor output, plus clipped Gaussian noise when exploring."""
        x = predict(self.actor, obs)
        if explore:
            x = np.clip(x + rng.normal(0.0, self.noise_std, size=x.shape), -1.0, 1.0)
            self.steps += 1
        return x

    def act(
        self,
        obs: NDArray[np.float64],
        env: "UavEnv",
        rng: np.random.Generator,
        *,
        explore: bool,
    ) -> Decision:
        raw = self.select(obs, rng, explore=explore)
        return Decision(to_action(raw, self.settings.max_distance), raw.copy())

    # ----- Learning -----------------------------------------------------
    def _critic_input(self, obs: NDArray[np.float64], actions: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.hstack([obs, actions])

    def critic_action_gradient(
        self, obs: NDArray[np.float64], actions: NDArray[np.float64]
    ) -> tuple[float, NDArray[np.float64]]:
        """Mean critic value over the batch and dQ/da for every row."""
        q, cache = forward(self.critic, self._critic_input(obs, actions))
        grads = backward(self.critic, cache, np.ones_like(q))
        return float(np.mean(q)), grads.input[:, self.obs_width:]

    def update_critic(self, batch: "Batch") -> float:
        """Descend mean (y - Q(s, a))^2 using the stored action a."""
        n = len(batch)
        next_actions = predict(self.target_actor, batch.next_obs)
        q_next = predict(self.target_critic, self._critic_input(batch.next_obs, next_actions))[:, 0]
        y = batch.rewards + self.settings.gamma * q_next * (~batch.terminals)

        q, cache = forward(self.critic, self._critic_input(batch.obs, batch.actions))
        diff = q[:, 0] - y
        loss = float(np.mean(diff * diff))
        if not np.isfinite(loss):
            raise NonFiniteError(f"non-finite critic loss: {loss}")
        grads = backward(self.critic, cache, (2.0 * diff / n)[:, None])
        adam_step(self.critic, grads, self.settings.critic_adam)
        return loss

    def update_actor(self, obs: NDArray[np.float64]) -> float:
        """Ascend the mean of Q(s, pi(s)) through the chain rule; returns the pre-step value."""
        n = obs.shape[0]
        actions, cache = forward(self.actor, obs)
        objective, dq_da = self.critic_action_gradient(obs, actions)
        grads = backward(self.actor, cache, dq_da / n)
        adam_step(self.actor, grads, self.settings.actor_adam, ascend=True)
        return objective

    def learn(self, batch: "Batch") -> LearnResult:
        if len(batch) == 0:
            raise ValueError("cannot learn from an empty batch")
        critic_loss = self.update_critic(batch)
        objective = self.update_actor(batch.obs)
        soft_update(self.target_actor, self.actor, self.settings.tau)
        soft_update(self.target_critic, self.critic, self.settings.tau)
        return LearnResult(loss=critic_loss, actor_objective=objective)

    # ----- Checkpoint hooks ---------------------------------------------
    def networks(self) -> Dict[str, NetworkParams]:
        return {
            "actor": self.actor,
            "critic": self.critic,
            "target_actor": self.target_actor,
            "target_critic": self.target_critic,
        }

    def load_networks(self, nets: Dict[str, NetworkParams], *, steps: int = 0) -> None:
        expected = {
            "actor": self.actor.specs,
            "critic": self.critic.specs,
            "target_actor": self.actor.specs,
            "target_critic": self.critic.specs,
        }
        for name, specs in expected.items():
            if nets[name].specs != specs:
                raise NetworkShapeError(f"{name} network does not match the configured layers")
        self.actor = nets["actor"]
        self.critic = nets["critic"]
        self.target_actor = nets["target_actor"]
        self.target_critic = nets["target_critic"]
        self.steps = steps
