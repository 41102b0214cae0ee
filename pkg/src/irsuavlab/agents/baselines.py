"""Non-learning reference policies over the discrete flight table."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray

from irsuavlab.agents.actions import DiscreteActionTable
from irsuavlab.agents.base import AgentBase, Decision

if TYPE_CHECKING:
    from irsuavlab.env import EnvState, UavEnv


def greedy_select(env: "UavEnv", table: DiscreteActionTable, state: "EnvState | None" = None) -> int:
    """Index of the action with the best one-TS-ahead reward; lowest index on ties."""
    rewards = np.array([env.preview(act, state).reward for act in table.actions])
    return int(np.argmax(rewards))


def random_select(table: DiscreteActionTable, rng: np.random.Generator) -> int:
    return int(rng.integers(len(table)))


class GreedyAgent(AgentBase):
    algo = "greedy"

    def __init__(self, table: DiscreteActionTable) -> None:
        super().__init__()
        self.table = table

    def act(
        self,
        obs: NDArray[np.float64],
        env: "UavEnv",
        rng: np.random.Generator,
        *,
        explore: bool,
    ) -> Decision:
        idx = greedy_select(env, self.table)
        return Decision(self.table[idx], np.array([float(idx)]), idx)


class RandomAgent(AgentBase):
    algo = "random"

    def __init__(self, table: DiscreteActionTable) -> None:
        super().__init__()
        self.table = table

    def act(
        self,
        obs: NDArray[np.float64],
        env: "UavEnv",
        rng: np.random.Generator,
        *,
        explore: bool,
    ) -> Decision:
        idx = random_select(self.table, rng)
        return Decision(self.table[idx], np.array([float(idx)]), idx)
