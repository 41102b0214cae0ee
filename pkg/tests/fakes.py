from __future__ import annotations

from typing import Dict

import numpy as np

from irsuavlab.agents.base import AgentBase, Decision, LearnResult
from irsuavlab.env import Action
from irsuavlab.exceptions import NonFiniteError
from irsuavlab.neural import NetworkParams


# ---- Fixed-action agent ----
class FixedAgent(AgentBase):
    """Always flies the same action; never learns."""

    algo = "greedy"

    def __init__(self, action: Action) -> None:
        super().__init__()
        self.action = action

    def act(self, obs, env, rng, *, explore):  # type: ignore[no-untyped-def]
        return Decision(self.action, np.array([0.0]), 0)


# ---- Learning agent whose loss blows up ----
class ExplodingAgent(FixedAgent):
    algo = "dqn"
    learns = True

    def learn(self, batch) -> LearnResult:  # type: ignore[no-untyped-def]
        raise NonFiniteError("non-finite gradient")


# ---- Learning agent that counts its updates ----
class CountingAgent(FixedAgent):
    algo = "dqn"
    learns = True

    def __init__(self, action: Action) -> None:
        super().__init__(action)
        self.batch_sizes: list[int] = []

    def learn(self, batch) -> LearnResult:  # type: ignore[no-untyped-def]
        self.batch_sizes.append(len(batch))
        self.steps += 1
        return LearnResult(loss=0.5)

    def networks(self) -> Dict[str, NetworkParams]:
        return {}
